//! Exact arithmetic in the field Q(i, sqrt(p)) for a squarefree positive integer p.
//!
//! A [`Scalar`] is the quadruple (a, b, c, d) of arbitrary-precision rationals
//! representing a + b*i + c*sqrt(p) + d*i*sqrt(p).  The radicand p is a context
//! parameter carried by the containing structure (see [`QuadField`]), not by each
//! value: addition, negation, conjugation and the real/imaginary splits do not
//! depend on p, while multiplication and inversion do.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Rational shorthand.
pub type Rat = BigRational;

/// Build a rational from an integer.
pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Build a rational from numerator and denominator.
pub fn ratio(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Element of Q(i, sqrt(p)): `a + b*i + c*r + d*i*r` where `r = sqrt(p)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scalar {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            a: Rat::zero(),
            b: Rat::zero(),
            c: Rat::zero(),
            d: Rat::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_rat(Rat::one())
    }

    pub fn from_rat(a: Rat) -> Self {
        Scalar {
            a,
            b: Rat::zero(),
            c: Rat::zero(),
            d: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rat(rat(n))
    }

    /// The imaginary unit i.
    pub fn i() -> Self {
        Scalar {
            a: Rat::zero(),
            b: Rat::one(),
            c: Rat::zero(),
            d: Rat::zero(),
        }
    }

    /// The generator r = sqrt(p).
    pub fn root() -> Self {
        Scalar {
            a: Rat::zero(),
            b: Rat::zero(),
            c: Rat::one(),
            d: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when the value lies in Q(sqrt(p)), i.e. has no imaginary component.
    pub fn is_real(&self) -> bool {
        self.b.is_zero() && self.d.is_zero()
    }

    /// True when the value is a plain rational.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Complex conjugation: i -> -i, fixing sqrt(p).
    pub fn conj(&self) -> Self {
        Scalar {
            a: self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
            d: -self.d.clone(),
        }
    }

    /// Galois conjugation over Q(i): sqrt(p) -> -sqrt(p).
    pub fn conj_root(&self) -> Self {
        Scalar {
            a: self.a.clone(),
            b: self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }

    /// Real part as an element of Q(sqrt(p)), returned with zeroed i-components.
    pub fn real_part(&self) -> Self {
        Scalar {
            a: self.a.clone(),
            b: Rat::zero(),
            c: self.c.clone(),
            d: Rat::zero(),
        }
    }

    /// Imaginary part b + d*sqrt(p) as an element of Q(sqrt(p)).
    pub fn imag_part(&self) -> Self {
        Scalar {
            a: self.b.clone(),
            b: Rat::zero(),
            c: self.d.clone(),
            d: Rat::zero(),
        }
    }

    pub fn neg(&self) -> Self {
        Scalar {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }

    pub fn add(&self, o: &Scalar) -> Self {
        Scalar {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            c: &self.c + &o.c,
            d: &self.d + &o.d,
        }
    }

    pub fn sub(&self, o: &Scalar) -> Self {
        Scalar {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            c: &self.c - &o.c,
            d: &self.d - &o.d,
        }
    }

    /// Scale by a rational.
    pub fn scale(&self, r: &Rat) -> Self {
        Scalar {
            a: &self.a * r,
            b: &self.b * r,
            c: &self.c * r,
            d: &self.d * r,
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_scalar(self))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_scalar(self))
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical textual form `a + b*i + c*r + d*i*r`, omitting zero terms;
/// `0` for the zero value.
pub fn format_scalar(s: &Scalar) -> String {
    let mut parts: Vec<String> = Vec::new();
    if !s.a.is_zero() {
        parts.push(fmt_rat(&s.a));
    }
    if !s.b.is_zero() {
        parts.push(format!("{}*i", fmt_rat(&s.b)));
    }
    if !s.c.is_zero() {
        parts.push(format!("{}*r", fmt_rat(&s.c)));
    }
    if !s.d.is_zero() {
        parts.push(format!("{}*i*r", fmt_rat(&s.d)));
    }
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        if let Some(stripped) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(stripped);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

/// Parse the textual form produced by [`format_scalar`].
pub fn parse_scalar(text: &str) -> Result<Scalar, String> {
    let cleaned = text.replace(' ', "");
    if cleaned.is_empty() {
        return Err("empty scalar".into());
    }
    // Split into signed terms.
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (k, ch) in cleaned.char_indices() {
        if (ch == '+' || ch == '-') && k > 0 && !cleaned[..k].ends_with('/') {
            terms.push(cur.clone());
            cur.clear();
            if ch == '-' {
                cur.push('-');
            }
        } else {
            cur.push(ch);
        }
    }
    terms.push(cur);
    let mut out = Scalar::zero();
    for t in terms {
        if t.is_empty() || t == "-" {
            return Err(format!("malformed term in scalar: {text:?}"));
        }
        let (slot, body) = if let Some(b) = t.strip_suffix("*i*r") {
            (3, b.to_string())
        } else if let Some(b) = t.strip_suffix("i*r") {
            (3, coeff_or_one(b)?)
        } else if let Some(b) = t.strip_suffix("*r") {
            if let Some(bi) = b.strip_suffix("*i") {
                (3, bi.to_string())
            } else {
                (2, b.to_string())
            }
        } else if let Some(b) = t.strip_suffix('r') {
            (2, coeff_or_one(b)?)
        } else if let Some(b) = t.strip_suffix("*i") {
            (1, b.to_string())
        } else if let Some(b) = t.strip_suffix('i') {
            (1, coeff_or_one(b)?)
        } else {
            (0, t.clone())
        };
        let r: Rat = body
            .parse::<BigRational>()
            .map_err(|e| format!("bad rational {body:?}: {e}"))?;
        match slot {
            0 => out.a += r,
            1 => out.b += r,
            2 => out.c += r,
            _ => out.d += r,
        }
    }
    Ok(out)
}

fn coeff_or_one(b: &str) -> Result<String, String> {
    if b.is_empty() {
        Ok("1".into())
    } else if b == "-" {
        Ok("-1".into())
    } else {
        Err(format!("malformed coefficient {b:?}"))
    }
}

/// Arithmetic context for Q(i, sqrt(p)).  `p` must be positive and squarefree;
/// all products and inverses interpret the `c`, `d` components against this p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadField {
    pub p: i64,
}

impl QuadField {
    pub fn new(p: i64) -> Self {
        assert!(p > 0, "radicand must be positive");
        assert!(is_squarefree(p), "radicand must be squarefree, got {p}");
        QuadField { p }
    }

    pub fn mul(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let p = rat(self.p);
        let a = &x.a * &y.a - &x.b * &y.b + (&x.c * &y.c - &x.d * &y.d) * &p;
        let b = &x.a * &y.b + &x.b * &y.a + (&x.c * &y.d + &x.d * &y.c) * &p;
        let c = &x.a * &y.c + &x.c * &y.a - (&x.b * &y.d + &x.d * &y.b);
        let d = &x.a * &y.d + &x.d * &y.a + &x.b * &y.c + &x.c * &y.b;
        Scalar { a, b, c, d }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, x: &Scalar) -> Scalar {
        assert!(!x.is_zero(), "division by zero");
        // Clear sqrt(p): x * conj_root(x) lies in Q(i).
        let y = x.conj_root();
        let z = self.mul(x, &y); // in Q(i)
        debug_assert!(z.c.is_zero() && z.d.is_zero());
        // Clear i: z * conj(z) is rational.
        let w = z.conj();
        let n = self.mul(&z, &w);
        debug_assert!(n.is_rational());
        let ninv = Rat::one() / n.a;
        self.mul(&y, &w).scale(&ninv)
    }

    pub fn div(&self, x: &Scalar, y: &Scalar) -> Scalar {
        self.mul(x, &self.inv(y))
    }

    /// x^2.
    pub fn square(&self, x: &Scalar) -> Scalar {
        self.mul(x, x)
    }
}

fn is_squarefree(mut n: i64) -> bool {
    let mut f = 2i64;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return false;
            }
        }
        f += 1;
    }
    true
}

/// Decompose m = s^2 * p with p squarefree; returns (s, p).
pub fn squarefree_decompose(m: i64) -> (i64, i64) {
    assert!(m > 0);
    let mut s = 1i64;
    let mut p = m;
    let mut f = 2i64;
    while f * f <= p {
        while p % (f * f) == 0 {
            p /= f * f;
            s *= f;
        }
        f += 1;
    }
    (s, p)
}

/// The value 1/sqrt(m) expressed in Q(sqrt(p)) where m = s^2 * p.
/// Requires the squarefree part of m to equal the field radicand (or 1).
pub fn inv_sqrt(fld: &QuadField, m: i64) -> Scalar {
    let (s, p0) = squarefree_decompose(m);
    if p0 == 1 {
        Scalar::from_rat(ratio(1, s))
    } else {
        assert_eq!(p0, fld.p, "sqrt({m}) does not lie in Q(i, sqrt({}))", fld.p);
        // 1/(s*sqrt(p)) = sqrt(p)/(s*p)
        Scalar {
            a: Rat::zero(),
            b: Rat::zero(),
            c: ratio(1, s * p0),
            d: Rat::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> QuadField {
        QuadField::new(5)
    }

    #[test]
    fn imag_part_examples() {
        // 3 + 5i has imaginary part 5
        let x = Scalar {
            a: rat(3),
            b: rat(5),
            c: rat(0).into(),
            d: rat(0).into(),
        };
        assert_eq!(x.imag_part(), Scalar::from_int(5));
        // (1 + i)^2 = 2i, imaginary part 2
        let f = f5();
        let one_plus_i = Scalar::one().add(&Scalar::i());
        let sq = f.square(&one_plus_i);
        assert_eq!(sq, Scalar::i().scale(&rat(2)));
        assert_eq!(sq.imag_part(), Scalar::from_int(2));
    }

    #[test]
    fn sqrt_p_squares_to_p() {
        let f = f5();
        assert_eq!(f.square(&Scalar::root()), Scalar::from_int(5));
        // (i*r)^2 = -p
        let ir = f.mul(&Scalar::i(), &Scalar::root());
        assert_eq!(f.square(&ir), Scalar::from_int(-5));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = f5();
        let x = Scalar {
            a: ratio(2, 3),
            b: rat(-1),
            c: ratio(1, 7),
            d: rat(4),
        };
        let inv = f.inv(&x);
        assert_eq!(f.mul(&x, &inv), Scalar::one());
    }

    #[test]
    fn conj_is_field_automorphism() {
        let f = f5();
        let x = Scalar {
            a: rat(1),
            b: rat(2),
            c: rat(3),
            d: rat(4),
        };
        let y = Scalar {
            a: ratio(1, 2),
            b: rat(-3),
            c: rat(0),
            d: ratio(5, 9),
        };
        assert_eq!(f.mul(&x, &y).conj(), f.mul(&x.conj(), &y.conj()));
        assert_eq!(x.add(&y).conj(), x.conj().add(&y.conj()));
        assert_eq!(
            f.mul(&x, &y).conj_root(),
            f.mul(&x.conj_root(), &y.conj_root())
        );
    }

    #[test]
    fn inv_sqrt_values() {
        let f6 = QuadField::new(6);
        let v = inv_sqrt(&f6, 24); // 1/sqrt(24) = sqrt(6)/12
        assert_eq!(v.c, ratio(1, 12));
        assert_eq!(f6.square(&v), Scalar::from_rat(ratio(1, 24)));
        let f2 = QuadField::new(2);
        let w = inv_sqrt(&f2, 4); // rational 1/2
        assert_eq!(w, Scalar::from_rat(ratio(1, 2)));
    }

    #[test]
    fn parse_format_roundtrip() {
        let samples = [
            Scalar::zero(),
            Scalar::one(),
            Scalar::i().neg(),
            Scalar {
                a: ratio(-3, 2),
                b: rat(7),
                c: ratio(1, 12),
                d: ratio(-5, 4),
            },
        ];
        for s in &samples {
            let text = format_scalar(s);
            let back = parse_scalar(&text).unwrap();
            assert_eq!(&back, s, "roundtrip failed for {text}");
        }
        assert_eq!(
            parse_scalar("1/2 + 3*i - 2*r + i*r").unwrap(),
            Scalar {
                a: ratio(1, 2),
                b: rat(3),
                c: rat(-2),
                d: rat(1),
            }
        );
    }
}
