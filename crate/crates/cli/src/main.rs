//! Command line front end for the engine: classification of sigma-positive
//! systems, closed-form solving, named verification suites, and structure
//! reports, all with deterministic JSON output.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use igcs_core::chevalley::{AlgebraElement, WeylBasis};
use igcs_core::forms::{
    closed_two_forms, construct_h0_pair, e6_form, e6_variant_roots, extend_cartan_form,
    exterior_derivative, is_admissible, one_form_derivative, regular_family_form,
    semidirect_closedness_check, sl_block_roots, sln_h_form, so_lorentz_form, so_type_c_roots,
    AdmissiblePair, RegularSubalgebra, TwoForm,
};
use igcs_core::gcs::{
    b_field_covector, b_field_transform, build_structure, check_complex_structure_conditions,
    covector_is_real, extract_mu, gcs_type, is_normal_form, type_from_invariants,
};
use igcs_core::matrix::{self, Mat};
use igcs_core::real_forms::{
    compact_involution, sigma_e6_f4, sigma_e6_sp4, sigma_sl_quaternionic, sigma_so_lorentz,
    Antiinvolution,
};
use igcs_core::root_system::{apply_perm_to_set, set_iter, Family, RootSet, RootSystem};
use igcs_core::scalar::{format_scalar, parse_scalar, ratio, Scalar};
use igcs_core::sigma_systems::{
    canonical_form, classify_sigma_positive, enumerate_sigma_positive, equivalence_witness,
    is_sigma_positive, set_from_roots, sigma_commuting_weyl, transform_group,
};

#[derive(Parser)]
#[command(
    name = "igcs",
    version,
    about = "Exact engine for invariant generalized complex structures"
)]
struct Cli {
    /// Write the JSON report to this path instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Budget for enumerations (Weyl group size, solver dimension).
    #[arg(long, global = true, default_value_t = 200_000)]
    bound: usize,
    /// Seed for randomized property checks.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify sigma-positive systems up to equivalence.
    Classify {
        family: String,
        rank: usize,
        /// Real form: compact, slH, lorentz, f4, sp4.
        form: String,
    },
    /// Solve for all closed invariant 2-forms on a regular subalgebra.
    Solve {
        /// JSON input: {"family", "rank", "cartan"?: [[scalar strings]], "roots"?: [[int]]}.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Run a named verification suite; exit 0 iff every check passes.
    Verify {
        /// One of: weyl-axioms, prop-rho, thm-main, cor-type, prop-bfield,
        /// clasif1, clasif2, e6-systems, thm-slnh, thm-so, thm-e66, prop-n.
        id: String,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Build the canonical pair for a real form and report admissibility.
    Admissible {
        family: String,
        rank: usize,
        form: String,
        /// Root subsystem variant (E6 only, 1..6).
        #[arg(long, default_value_t = 1)]
        variant: usize,
    },
    /// Report the type of the structure attached to the canonical pair.
    Type {
        family: String,
        rank: usize,
        form: String,
        #[arg(long, default_value_t = 1)]
        variant: usize,
    },
    /// Normalize a pair with random coefficients by a closed shear.
    Bfield {
        #[arg(long, default_value = "A")]
        family: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Dump the root system data.
    DumpRoots { family: String, rank: usize },
    /// Dump the nonzero structure constants of the basis.
    DumpConstants { family: String, rank: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match run(&cli) {
        Ok((report, pass)) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match &cli.output {
                Some(path) => {
                    if let Err(e) = fs::write(path, text + "\n") {
                        eprintln!("igcs: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{text}"),
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("igcs: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(Value, bool)> {
    match &cli.cmd {
        Cmd::Classify { family, rank, form } => cmd_classify(family, *rank, form, cli.bound),
        Cmd::Solve {
            input,
            family,
            rank,
        } => cmd_solve(input.as_deref(), family.as_deref(), *rank, cli.bound),
        Cmd::Verify { id, family, rank } => {
            cmd_verify(id, family.as_deref(), *rank, cli.bound, cli.seed)
        }
        Cmd::Admissible {
            family,
            rank,
            form,
            variant,
        } => cmd_admissible(family, *rank, form, *variant, false),
        Cmd::Type {
            family,
            rank,
            form,
            variant,
        } => cmd_admissible(family, *rank, form, *variant, true),
        Cmd::Bfield { family, rank } => cmd_bfield(family, *rank, cli.seed),
        Cmd::DumpRoots { family, rank } => cmd_dump_roots(family, *rank),
        Cmd::DumpConstants { family, rank } => cmd_dump_constants(family, *rank),
    }
}

// ---------------------------------------------------------------- helpers

fn parse_family(s: &str) -> Result<Family> {
    match s.to_ascii_uppercase().as_str() {
        "A" => Ok(Family::A),
        "D" => Ok(Family::D),
        "E6" | "E" => Ok(Family::E6),
        _ => bail!("unknown family {s:?} (expected A, D, or E6)"),
    }
}

fn build_wb(family: Family, rank: usize) -> Arc<WeylBasis> {
    Arc::new(WeylBasis::build(Arc::new(RootSystem::build(family, rank))))
}

fn sigma_named(wb: &Arc<WeylBasis>, form: &str) -> Result<Antiinvolution> {
    let fam = wb.rs.family;
    match (form.to_ascii_lowercase().as_str(), fam) {
        ("compact", _) => Ok(compact_involution(wb)),
        ("slh", Family::A) => {
            if wb.rs.rank % 2 == 0 {
                bail!("slH needs odd rank (sl of even size)");
            }
            Ok(sigma_sl_quaternionic(wb))
        }
        ("lorentz", Family::D) => Ok(sigma_so_lorentz(wb)),
        ("f4", Family::E6) => Ok(sigma_e6_f4(wb)),
        ("sp4", Family::E6) => Ok(sigma_e6_sp4(wb)),
        _ => bail!("form {form:?} is not defined for family {fam:?}"),
    }
}

fn r0_named(wb: &Arc<WeylBasis>, form: &str, variant: usize) -> Result<RootSet> {
    match form.to_ascii_lowercase().as_str() {
        "compact" => Ok(wb.rs.positive_set()),
        "slh" => Ok(sl_block_roots(wb, (wb.rs.rank + 1) / 2)),
        "lorentz" => Ok(so_type_c_roots(wb)),
        "f4" | "sp4" => {
            if !(1..=6).contains(&variant) {
                bail!("variant must lie in 1..6");
            }
            Ok(e6_variant_roots(wb, variant))
        }
        _ => bail!("unknown form {form:?}"),
    }
}

fn full_cartan(wb: &WeylBasis) -> Vec<Vec<Scalar>> {
    wb.rs
        .cartan_basis
        .iter()
        .map(|v| v.iter().map(|r| Scalar::from_rat(r.clone())).collect())
        .collect()
}

fn roots_of_set(rs: &RootSystem, s: RootSet) -> Value {
    Value::Array(
        set_iter(s)
            .map(|i| Value::Array(rs.roots[i].iter().map(|&c| json!(c)).collect()))
            .collect(),
    )
}

fn form_to_json(w: &TwoForm) -> Value {
    Value::Array(
        w.m.iter()
            .map(|row| Value::Array(row.iter().map(|s| json!(format_scalar(s))).collect()))
            .collect(),
    )
}

/// Build the canonical pair for a form: constructed Cartan data plus the
/// plain Cartan-block 2-form.
fn canonical_pair(
    wb: &Arc<WeylBasis>,
    form: &str,
    variant: usize,
) -> Result<(AdmissiblePair, usize)> {
    let sigma = sigma_named(wb, form)?;
    let r0 = r0_named(wb, form, variant)?;
    let cp = construct_h0_pair(wb, &sigma, r0)
        .map_err(|e| anyhow!("Cartan pair construction failed: {e}"))?;
    let s_dim = cp.s_dim;
    let k = RegularSubalgebra::new(wb.clone(), cp.h0, r0)
        .map_err(|e| anyhow!("subalgebra rejected: {e}"))?;
    let w = extend_cartan_form(&k, &cp.w0).map_err(|e| anyhow!("form rejected: {e}"))?;
    let pair =
        AdmissiblePair::verify(k, w, sigma).map_err(|e| anyhow!("pair not admissible: {e}"))?;
    Ok((pair, s_dim))
}

// ---------------------------------------------------------------- commands

fn cmd_classify(family: &str, rank: usize, form: &str, bound: usize) -> Result<(Value, bool)> {
    let fam = parse_family(family)?;
    let wb = build_wb(fam, rank);
    let rs = &wb.rs;
    let sigma = sigma_named(&wb, form)?;
    let sp = sigma.root_perm();
    let cls = classify_sigma_positive(rs, &sp, bound);
    let classes: Vec<Value> = cls
        .classes
        .iter()
        .map(|c| {
            json!({
                "representative": roots_of_set(rs, c.example),
                "members": c.members,
                "symmetric_part_size": rs.symmetric_part(c.example).count_ones(),
            })
        })
        .collect();
    let report = json!({
        "command": "classify",
        "family": format!("{fam:?}"),
        "rank": rank,
        "form": form,
        "total_systems": cls.total,
        "class_count": cls.classes.len(),
        "classes": classes,
        "fixed_root": cls.fixed_root,
    });
    Ok((report, true))
}

fn cmd_solve(
    input: Option<&std::path::Path>,
    family: Option<&str>,
    rank: Option<usize>,
    bound: usize,
) -> Result<(Value, bool)> {
    let (wb, h0, r0) = match input {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let v: Value = serde_json::from_str(&text).context("input is not valid JSON")?;
            let fam = parse_family(
                v.get("family")
                    .and_then(Value::as_str)
                    .ok_or_else(|| anyhow!("input needs a \"family\" string"))?,
            )?;
            let rk = v
                .get("rank")
                .and_then(Value::as_u64)
                .ok_or_else(|| anyhow!("input needs a \"rank\" number"))?
                as usize;
            let wb = build_wb(fam, rk);
            let h0 = match v.get("cartan") {
                Some(Value::Array(rows)) => rows
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| anyhow!("cartan rows must be arrays"))?
                            .iter()
                            .map(|e| {
                                parse_scalar(
                                    e.as_str()
                                        .ok_or_else(|| anyhow!("cartan entries are strings"))?,
                                )
                                .map_err(|e| anyhow!("bad scalar: {e}"))
                            })
                            .collect::<Result<Vec<Scalar>>>()
                    })
                    .collect::<Result<Vec<Vec<Scalar>>>>()?,
                None => full_cartan(&wb),
                _ => bail!("\"cartan\" must be an array of rows"),
            };
            let r0 = match v.get("roots") {
                Some(Value::Array(list)) => {
                    let roots: Vec<Vec<i64>> = list
                        .iter()
                        .map(|row| {
                            row.as_array()
                                .ok_or_else(|| anyhow!("root rows must be arrays"))?
                                .iter()
                                .map(|e| {
                                    e.as_i64()
                                        .ok_or_else(|| anyhow!("root entries are integers"))
                                })
                                .collect::<Result<Vec<i64>>>()
                        })
                        .collect::<Result<Vec<Vec<i64>>>>()?;
                    set_from_roots(&wb.rs, &roots)
                }
                None => wb.rs.positive_set(),
                _ => bail!("\"roots\" must be an array of coordinate vectors"),
            };
            (wb, h0, r0)
        }
        None => {
            let fam = parse_family(family.ok_or_else(|| anyhow!("need --input or --family"))?)?;
            let rk = rank.ok_or_else(|| anyhow!("need --rank with --family"))?;
            let wb = build_wb(fam, rk);
            let h0 = full_cartan(&wb);
            let r0 = wb.rs.positive_set();
            (wb, h0, r0)
        }
    };
    let k = RegularSubalgebra::new(wb.clone(), h0, r0)
        .map_err(|e| anyhow!("subalgebra rejected: {e}"))?;
    let sol = closed_two_forms(&k, bound).map_err(|e| anyhow!("solver failed: {e}"))?;
    let report = json!({
        "command": "solve",
        "subalgebra_dimension": k.dim(),
        "cartan_dimension": k.cartan_dim(),
        "closed_form_dimension": sol.len(),
        "basis": sol.iter().map(form_to_json).collect::<Vec<_>>(),
    });
    Ok((report, true))
}

fn cmd_admissible(
    family: &str,
    rank: usize,
    form: &str,
    variant: usize,
    with_structure: bool,
) -> Result<(Value, bool)> {
    let fam = parse_family(family)?;
    let wb = build_wb(fam, rank);
    let (pair, s_dim) = canonical_pair(&wb, form, variant)?;
    let rep = &pair.report;
    let mut report = json!({
        "command": if with_structure { "type" } else { "admissible" },
        "family": format!("{fam:?}"),
        "rank": rank,
        "form": form,
        "subalgebra_dimension": pair.k.dim(),
        "cartan_dimension": pair.k.cartan_dim(),
        "symmetric_coroot_dimension": s_dim,
        "spanning": rep.spanning,
        "closed": rep.closed,
        "l_dimension": rep.l_dim,
        "l_abelian": rep.l_abelian,
        "im_nondegenerate": rep.im_nondegenerate,
        "admissible": rep.admissible,
    });
    if with_structure {
        let s = build_structure(&pair).map_err(|e| anyhow!("structure failed: {e}"))?;
        let cross = type_from_invariants(&pair.k.wb, rep.l_dim);
        report["type"] = json!(s.gcs_type);
        report["type_from_invariants"] = json!(cross);
        report["types_agree"] = json!(s.gcs_type == cross);
        return Ok((report, rep.admissible && s.gcs_type == cross));
    }
    Ok((report, rep.admissible))
}

fn cmd_bfield(family: &str, rank: usize, seed: u64) -> Result<(Value, bool)> {
    let fam = parse_family(family)?;
    if fam != Family::A || rank % 2 != 0 {
        bail!("bfield demo expects an even-rank A family (compact pair shape)");
    }
    let wb = build_wb(fam, rank);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = RegularSubalgebra::new(wb.clone(), full_cartan(&wb), wb.rs.positive_set())
        .map_err(|e| anyhow!("subalgebra rejected: {e}"))?;
    let c = k.cartan_dim();
    let mut w0 = matrix::zeros(c, c);
    for a in 0..(c / 2) {
        w0[2 * a][2 * a + 1] = Scalar::i();
        w0[2 * a + 1][2 * a] = Scalar::i().neg();
    }
    let mut mu = vec![Scalar::zero(); wb.rs.count()];
    for &alpha in &k.r0_list {
        let re = rng.gen_range(-3i64..=3);
        let im = rng.gen_range(-3i64..=3);
        mu[alpha] = Scalar::from_int(re).add(&Scalar::i().scale(&ratio(im, 1)));
    }
    let w = regular_family_form(&k, &mu, &w0).map_err(|e| anyhow!("form rejected: {e}"))?;
    let sigma = compact_involution(&wb);
    let pair =
        AdmissiblePair::verify(k, w, sigma).map_err(|e| anyhow!("pair not admissible: {e}"))?;
    let before = is_normal_form(&pair).map_err(|e| anyhow!("{e}"))?;
    let xi = b_field_covector(&pair).map_err(|e| anyhow!("{e}"))?;
    let real = covector_is_real(&pair.k.wb, &pair.sigma, &xi);
    let moved = b_field_transform(&pair, &xi).map_err(|e| anyhow!("transform rejected: {e}"))?;
    let after = is_normal_form(&moved).map_err(|e| anyhow!("{e}"))?;
    let type_kept = gcs_type(&moved) == gcs_type(&pair);
    let report = json!({
        "command": "bfield",
        "family": format!("{fam:?}"),
        "rank": rank,
        "seed": seed,
        "covector": xi.iter().map(format_scalar).collect::<Vec<_>>(),
        "covector_real": real,
        "normal_form_before": before,
        "normal_form_after": after,
        "type_preserved": type_kept,
    });
    Ok((report, real && after && type_kept))
}

fn cmd_dump_roots(family: &str, rank: usize) -> Result<(Value, bool)> {
    let fam = parse_family(family)?;
    let rs = RootSystem::build(fam, rank);
    let report = json!({
        "command": "dump-roots",
        "family": format!("{fam:?}"),
        "rank": rank,
        "ambient": rs.ambient,
        "count": rs.count(),
        "roots": rs.roots.iter().map(|r| json!(r)).collect::<Vec<_>>(),
        "simple": rs.simple.iter().map(|&i| json!(rs.roots[i])).collect::<Vec<_>>(),
        "positive": roots_of_set(&rs, rs.positive_set()),
        "pairing_denominator": rs.m,
    });
    Ok((report, true))
}

fn cmd_dump_constants(family: &str, rank: usize) -> Result<(Value, bool)> {
    let fam = parse_family(family)?;
    let wb = build_wb(fam, rank);
    let rs = &wb.rs;
    let mut entries = Vec::new();
    for i in 0..rs.count() {
        for j in 0..rs.count() {
            if rs.sum(i, j).is_some() {
                entries.push(json!({
                    "alpha": rs.roots[i],
                    "beta": rs.roots[j],
                    "n": format_scalar(&wb.n_const(i, j)),
                }));
            }
        }
    }
    let report = json!({
        "command": "dump-constants",
        "family": format!("{fam:?}"),
        "rank": rank,
        "count": entries.len(),
        "constants": entries,
    });
    Ok((report, true))
}

// ---------------------------------------------------------------- verify

struct Check {
    name: &'static str,
    pass: bool,
    info: String,
}

fn check(name: &'static str, pass: bool, info: impl Into<String>) -> Check {
    Check {
        name,
        pass,
        info: info.into(),
    }
}

fn cmd_verify(
    id: &str,
    family: Option<&str>,
    rank: Option<usize>,
    bound: usize,
    seed: u64,
) -> Result<(Value, bool)> {
    let fam = family.map(parse_family).transpose()?;
    let checks = match id {
        "weyl-axioms" => verify_weyl_axioms(fam.unwrap_or(Family::A), rank.unwrap_or(3)),
        "prop-rho" => verify_semidirect(fam.unwrap_or(Family::A), rank.unwrap_or(2), seed),
        "thm-main" => verify_inner_solver(fam.unwrap_or(Family::A), rank.unwrap_or(2), bound),
        "cor-type" => verify_type_formula(rank.unwrap_or(2))?,
        "prop-bfield" => verify_bfield(rank.unwrap_or(2))?,
        "clasif1" => verify_quaternionic_classes(rank.unwrap_or(3), bound)?,
        "clasif2" => verify_lorentz_classes(rank.unwrap_or(3), bound),
        "e6-systems" => verify_e6_systems(),
        "thm-slnh" => verify_sln_family(rank.unwrap_or(5), bound)?,
        "thm-so" => verify_so_family(rank.unwrap_or(3), bound),
        "thm-e66" => verify_e6_forms(),
        "prop-n" => verify_l_abelian()?,
        _ => bail!("unknown verification id {id:?}"),
    };
    let pass = checks.iter().all(|c| c.pass);
    let report = json!({
        "command": "verify",
        "id": id,
        "pass": pass,
        "checks": checks
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "info": c.info}))
            .collect::<Vec<_>>(),
    });
    Ok((report, pass))
}

/// Basis axioms: pairing normalization, real constants, negation symmetry,
/// and the Jacobi identity over all basis triples.
fn verify_weyl_axioms(fam: Family, rank: usize) -> Vec<Check> {
    let wb = build_wb(fam, rank);
    let rs = &wb.rs;
    let pairing = (0..rs.count())
        .all(|i| wb.killing(&wb.root_vector(i), &wb.root_vector(rs.neg[i])) == Scalar::one());
    let mut n_real = true;
    let mut n_negation = true;
    for i in 0..rs.count() {
        for j in 0..rs.count() {
            if rs.sum(i, j).is_none() {
                continue;
            }
            let n = wb.n_const(i, j);
            if !n.is_real() {
                n_real = false;
            }
            if wb.n_const(rs.neg[i], rs.neg[j]) != n.neg() {
                n_negation = false;
            }
        }
    }
    let mut gens: Vec<AlgebraElement> = (0..rs.count()).map(|i| wb.root_vector(i)).collect();
    for b in &rs.cartan_basis {
        gens.push(wb.cartan_vector(b));
    }
    let n = gens.len();
    let mut jacobi = true;
    'outer: for i in 0..n {
        for j in (i + 1)..n {
            let bij = wb.bracket(&gens[i], &gens[j]);
            for k in (j + 1)..n {
                let t1 = wb.bracket(&bij, &gens[k]);
                let t2 = wb.bracket(&wb.bracket(&gens[j], &gens[k]), &gens[i]);
                let t3 = wb.bracket(&wb.bracket(&gens[k], &gens[i]), &gens[j]);
                if !t1.add(&t2).add(&t3).is_zero() {
                    jacobi = false;
                    break 'outer;
                }
            }
        }
    }
    vec![
        check(
            "pairing_normalized",
            pairing,
            "<E_a, E_-a> = 1 for all roots",
        ),
        check("constants_real", n_real, "all structure constants real"),
        check("negation_antisymmetry", n_negation, "N(-a,-b) = -N(a,b)"),
        check("jacobi", jacobi, format!("all triples over {n} generators")),
    ]
}

/// Semidirect closedness: the component conditions agree with the direct
/// exterior derivative on random 2-forms, and d of d vanishes on covectors.
fn verify_semidirect(fam: Family, rank: usize, seed: u64) -> Vec<Check> {
    let wb = build_wb(fam, rank);
    let k = RegularSubalgebra::new(wb.clone(), full_cartan(&wb), wb.rs.positive_set()).unwrap();
    let d = k.dim();
    let c = k.cartan_dim();
    let s_idx: Vec<usize> = (0..c).collect();
    let p_idx: Vec<usize> = (c..d).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agree = true;
    let mut closed_sample = false;
    for round in 0..6 {
        let mut w = TwoForm::zero(d);
        for i in 0..d {
            for j in (i + 1)..d {
                let re = rng.gen_range(-2i64..=2);
                let im = rng.gen_range(-2i64..=2);
                w.set(
                    i,
                    j,
                    Scalar::from_int(re).add(&Scalar::i().scale(&ratio(im, 1))),
                );
            }
        }
        let rep = semidirect_closedness_check(&k, &s_idx, &p_idx, &w).unwrap();
        if !rep.agree {
            agree = false;
        }
        if round == 0 {
            // A certified-closed instance must satisfy both sides.
            let mut mu = vec![Scalar::zero(); wb.rs.count()];
            for &alpha in &k.r0_list {
                mu[alpha] = Scalar::from_int(rng.gen_range(1i64..=3));
            }
            let wc = regular_family_form(&k, &mu, &matrix::zeros(c, c)).unwrap();
            let repc = semidirect_closedness_check(&k, &s_idx, &p_idx, &wc).unwrap();
            closed_sample = repc.agree && repc.rho_closed && repc.conditions_hold;
        }
    }
    // d(d beta) = 0 for every basis covector.
    let mut dd_zero = true;
    for t in 0..d {
        let mut beta = vec![Scalar::zero(); d];
        beta[t] = Scalar::one();
        if !exterior_derivative(&k, &one_form_derivative(&k, &beta)).is_zero() {
            dd_zero = false;
        }
    }
    vec![
        check("component_conditions_agree", agree, "6 random forms"),
        check("closed_instance_satisfies_conditions", closed_sample, ""),
        check("d_squared_zero", dd_zero, "all basis covectors"),
    ]
}

/// Inner-shape solver: kernel dimension matches the closed family and the
/// family generators span the whole kernel.
fn verify_inner_solver(fam: Family, rank: usize, bound: usize) -> Vec<Check> {
    let wb = build_wb(fam, rank);
    let f = wb.field.clone();
    let k = RegularSubalgebra::new(wb.clone(), full_cartan(&wb), wb.rs.positive_set()).unwrap();
    let c = k.cartan_dim();
    let sol = match closed_two_forms(&k, bound) {
        Ok(s) => s,
        Err(e) => return vec![check("solver", false, format!("{e}"))],
    };
    let expected = k.r0_list.len() + c * (c - 1) / 2;
    let flat = |w: &TwoForm| {
        let d = w.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                out.push(w.m[i][j].clone());
            }
        }
        out
    };
    let mut fam_rows: Mat = Vec::new();
    for &alpha in &k.r0_list {
        let mut mu = vec![Scalar::zero(); wb.rs.count()];
        mu[alpha] = Scalar::one();
        fam_rows.push(flat(
            &regular_family_form(&k, &mu, &matrix::zeros(c, c)).unwrap(),
        ));
    }
    let zero_mu = vec![Scalar::zero(); wb.rs.count()];
    for a in 0..c {
        for b in (a + 1)..c {
            let mut w0 = matrix::zeros(c, c);
            w0[a][b] = Scalar::one();
            w0[b][a] = Scalar::one().neg();
            fam_rows.push(flat(&regular_family_form(&k, &zero_mu, &w0).unwrap()));
        }
    }
    let fam_rank = matrix::rank(&f, &fam_rows);
    let mut all: Mat = sol.iter().map(flat).collect();
    all.extend(fam_rows);
    let span_match = matrix::rank(&f, &all) == sol.len() && fam_rank == sol.len();
    vec![
        check(
            "kernel_dimension",
            sol.len() == expected,
            format!("solver {} vs family {expected}", sol.len()),
        ),
        check("family_spans_kernel", span_match, ""),
    ]
}

/// Type formula: codimension of k agrees with the root-data expression and
/// both realized types at rank 2 are reached.
fn verify_type_formula(rank: usize) -> Result<Vec<Check>> {
    let wb = build_wb(Family::A, rank);
    if rank % 2 != 0 {
        bail!("type check expects an even rank");
    }
    let (pair, _) = canonical_pair(&wb, "compact", 1)?;
    let t = gcs_type(&pair);
    let cross = type_from_invariants(&wb, pair.report.l_dim);
    let structure_ok = build_structure(&pair).is_ok();
    // Realize the next type up with a half-dimensional Cartan part: h0
    // spanned by b_{2a} + i b_{2a+1} has no real points.
    let mut h0: Vec<Vec<Scalar>> = Vec::new();
    let cb = full_cartan(&wb);
    for a in 0..(rank / 2) {
        let mut row = Vec::with_capacity(wb.rs.ambient);
        for t in 0..wb.rs.ambient {
            row.push(cb[2 * a][t].add(&wb.field.mul(&Scalar::i(), &cb[2 * a + 1][t])));
        }
        h0.push(row);
    }
    let k2 = RegularSubalgebra::new(wb.clone(), h0, wb.rs.positive_set())
        .map_err(|e| anyhow!("thin subalgebra rejected: {e}"))?;
    let d2 = k2.dim();
    let pair2 = AdmissiblePair::verify(k2, TwoForm::zero(d2), compact_involution(&wb))
        .map_err(|e| anyhow!("thin pair not admissible: {e}"))?;
    let t2 = gcs_type(&pair2);
    let half_r = wb.rs.count() / 2;
    Ok(vec![
        check("type_matches_formula", t == cross, format!("type {t}")),
        check("structure_valid", structure_ok, ""),
        check(
            "base_type",
            t == half_r,
            format!("expected {half_r}, got {t}"),
        ),
        check(
            "shifted_type",
            t2 == half_r + rank / 2 && t2 == type_from_invariants(&wb, 0),
            format!("expected {}, got {t2}", half_r + rank / 2),
        ),
    ])
}

/// Shear normalization: the canonical covector is real, kills every mixed
/// coefficient, and preserves the type.
fn verify_bfield(rank: usize) -> Result<Vec<Check>> {
    if rank % 2 != 0 {
        bail!("bfield check expects an even rank");
    }
    let wb = build_wb(Family::A, rank);
    let k = RegularSubalgebra::new(wb.clone(), full_cartan(&wb), wb.rs.positive_set()).unwrap();
    let c = k.cartan_dim();
    let mut w0 = matrix::zeros(c, c);
    for a in 0..(c / 2) {
        w0[2 * a][2 * a + 1] = Scalar::i();
        w0[2 * a + 1][2 * a] = Scalar::i().neg();
    }
    let mut mu = vec![Scalar::zero(); wb.rs.count()];
    for (p, &alpha) in k.r0_list.iter().enumerate() {
        mu[alpha] = Scalar::from_int(p as i64 + 2).add(&Scalar::i());
    }
    let w = regular_family_form(&k, &mu, &w0).unwrap();
    let base = extend_cartan_form(&k, &w0).unwrap();
    let pair = AdmissiblePair::verify(k, w, compact_involution(&wb))
        .map_err(|e| anyhow!("pair not admissible: {e}"))?;
    let not_normal = !is_normal_form(&pair).map_err(|e| anyhow!("{e}"))?;
    let xi = b_field_covector(&pair).map_err(|e| anyhow!("{e}"))?;
    let real = covector_is_real(&wb, &pair.sigma, &xi);
    let moved = b_field_transform(&pair, &xi).map_err(|e| anyhow!("transform rejected: {e}"))?;
    let mu_gone = extract_mu(&moved)
        .map_err(|e| anyhow!("{e}"))?
        .iter()
        .all(Scalar::is_zero);
    let shear_exact = moved.omega == base;
    let type_kept = gcs_type(&moved) == gcs_type(&pair);
    Ok(vec![
        check("starts_off_normal_form", not_normal, ""),
        check("covector_real", real, ""),
        check("mixed_coefficients_cleared", mu_gone, ""),
        check(
            "shear_equals_cartan_block",
            shear_exact,
            "omega - d xi is the Cartan form",
        ),
        check("type_preserved", type_kept, ""),
    ])
}

/// Quaternionic classification: the two published block systems are
/// sigma-positive and mutually equivalent, and the coverage claim (every
/// system equivalent to a block type) is tested as stated.  The engine
/// finds additional classes with empty symmetric part, so the coverage
/// check fails; the class inventory is reported for inspection.
fn verify_quaternionic_classes(rank: usize, bound: usize) -> Result<Vec<Check>> {
    if rank % 2 == 0 {
        bail!("quaternionic form needs odd rank");
    }
    let n = (rank + 1) / 2;
    let wb = build_wb(Family::A, rank);
    let rs = &wb.rs;
    let sigma = sigma_sl_quaternionic(&wb);
    let sp = sigma.root_perm();
    let (ta, tb) = quaternionic_block_types(n);
    let sa = set_from_roots(rs, &ta);
    let sb = set_from_roots(rs, &tb);
    let both_positive = is_sigma_positive(rs, &sp, sa) && is_sigma_positive(rs, &sp, sb);
    let ws = sigma_commuting_weyl(rs, &sp, bound);
    let group = transform_group(rs, &sp, &ws);
    let blocks_equivalent = equivalence_witness(&group, sa, sb).is_some();
    let cls = classify_sigma_positive(rs, &sp, bound);
    let ca = canonical_form(&group, sa);
    let uncovered: Vec<&igcs_core::sigma_systems::SigmaClass> =
        cls.classes.iter().filter(|c| c.canonical != ca).collect();
    let coverage = uncovered.is_empty();
    let inventory = cls
        .classes
        .iter()
        .map(|c| {
            format!(
                "class(members {}, symmetric part {})",
                c.members,
                rs.symmetric_part(c.example).count_ones()
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    Ok(vec![
        check("block_types_sigma_positive", both_positive, ""),
        check("block_types_equivalent", blocks_equivalent, ""),
        check(
            "block_types_cover_all_classes",
            coverage,
            format!(
                "{} of {} classes are non-block; {}",
                uncovered.len(),
                cls.classes.len(),
                inventory
            ),
        ),
    ])
}

fn quaternionic_block_types(n: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut type_a = Vec::new();
    let mut type_b = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut v = vec![0i64; 2 * n];
                v[i] = 1;
                v[j] = -1;
                type_a.push(v.clone());
                type_b.push(v);
            }
            let mut v = vec![0i64; 2 * n];
            v[i] = 1;
            v[j + n] = -1;
            type_a.push(v);
            let mut w = vec![0i64; 2 * n];
            w[i + n] = 1;
            w[j] = -1;
            type_b.push(w);
        }
    }
    (type_a, type_b)
}

/// Lorentz classification: the three listed systems cover every
/// sigma-positive system up to equivalence.
fn verify_lorentz_classes(rank: usize, bound: usize) -> Vec<Check> {
    let wb = build_wb(Family::D, rank);
    let rs = &wb.rs;
    let n = rs.ambient;
    let sigma = sigma_so_lorentz(&wb);
    let sp = sigma.root_perm();
    let pos = rs.positive_set();
    let mut hi = vec![0i64; n];
    hi[n - 2] = 1;
    hi[n - 1] = 1;
    let hi_idx = rs.root_index(&hi).unwrap();
    let mut lo = vec![0i64; n];
    lo[n - 2] = 1;
    lo[n - 1] = -1;
    let lo_idx = rs.root_index(&lo).unwrap();
    let types = [
        pos,
        (pos & !(1u128 << hi_idx)) | (1u128 << rs.neg[lo_idx]),
        (pos & !(1u128 << lo_idx)) | (1u128 << rs.neg[hi_idx]),
    ];
    let all_positive = types.iter().all(|&t| is_sigma_positive(rs, &sp, t));
    let ws = sigma_commuting_weyl(rs, &sp, bound);
    let group = transform_group(rs, &sp, &ws);
    let canons: Vec<RootSet> = types.iter().map(|&t| canonical_form(&group, t)).collect();
    let systems = enumerate_sigma_positive(rs, &sp);
    let covered = systems
        .iter()
        .all(|&s| canons.contains(&canonical_form(&group, s)));
    vec![
        check("listed_types_sigma_positive", all_positive, ""),
        check(
            "listed_types_cover_all_systems",
            covered,
            format!("{} systems enumerated", systems.len()),
        ),
    ]
}

/// The six reference subsystems: sigma-positive for both outer forms, with
/// sigma image exactly the complement, pairwise distinct.
fn verify_e6_systems() -> Vec<Check> {
    let wb = build_wb(Family::E6, 6);
    let rs = &wb.rs;
    let all: RootSet = (1u128 << rs.count()) - 1;
    let mut checks = Vec::new();
    for (name, sigma) in [("f4", sigma_e6_f4(&wb)), ("sp4", sigma_e6_sp4(&wb))] {
        let sp = sigma.root_perm();
        let mut positive = true;
        let mut complement = true;
        let mut seen: Vec<RootSet> = Vec::new();
        for v in 1..=6 {
            let s = e6_variant_roots(&wb, v);
            if !is_sigma_positive(rs, &sp, s) {
                positive = false;
            }
            if apply_perm_to_set(&sp, s) != all & !s {
                complement = false;
            }
            if seen.contains(&s) {
                positive = false;
            }
            seen.push(s);
        }
        checks.push(check(
            if name == "f4" {
                "f4_systems_sigma_positive"
            } else {
                "sp4_systems_sigma_positive"
            },
            positive,
            "six distinct subsystems",
        ));
        checks.push(check(
            if name == "f4" {
                "f4_images_are_complements"
            } else {
                "sp4_images_are_complements"
            },
            complement,
            "",
        ));
    }
    checks
}

/// Quaternionic block family: a generic instance is closed and the solver
/// kernel dimension equals the family's independent parameter count.
fn verify_sln_family(rank: usize, bound: usize) -> Result<Vec<Check>> {
    if rank % 2 == 0 {
        bail!("block family needs odd rank");
    }
    let n = (rank + 1) / 2;
    let wb = build_wb(Family::A, rank);
    let r0 = sl_block_roots(&wb, n);
    let k = RegularSubalgebra::new(wb.clone(), full_cartan(&wb), r0)
        .map_err(|e| anyhow!("subalgebra rejected: {e}"))?;
    let c = k.cartan_dim();
    let mut lam = matrix::zeros(n, n);
    let mut lam_m = matrix::zeros(n, n);
    let mut eta = vec![Scalar::zero(); n];
    let mut v = 1i64;
    for i in 0..n {
        eta[i] = Scalar::from_rat(ratio(2 * i as i64 + 1, 7));
        for j in 0..n {
            if i != j {
                lam[i][j] = Scalar::from_int(v);
            }
            lam_m[i][j] = Scalar::from_int(v + 1).add(&Scalar::i());
            v += 1;
        }
    }
    let w = sln_h_form(&k, n, &lam, &lam_m, &eta, &matrix::zeros(c, c))
        .map_err(|e| anyhow!("family instance rejected: {e}"))?;
    let closed = exterior_derivative(&k, &w).is_zero();
    let sol = closed_two_forms(&k, bound).map_err(|e| anyhow!("solver failed: {e}"))?;
    let cartan_free = c - (n - 1);
    let expected = n * (n - 1) + (n - 1) + n * n + cartan_free * (cartan_free - 1) / 2;
    Ok(vec![
        check("generic_instance_closed", closed, ""),
        check(
            "kernel_matches_parameter_count",
            sol.len() == expected,
            format!("solver {} vs derived count {expected}", sol.len()),
        ),
    ])
}

/// Lorentz family: generic instance closed, solver dimension matches.
fn verify_so_family(rank: usize, bound: usize) -> Vec<Check> {
    let wb = build_wb(Family::D, rank);
    let rs = wb.rs.clone();
    let n = rs.ambient;
    let k = RegularSubalgebra::new(wb.clone(), full_cartan(&wb), so_type_c_roots(&wb)).unwrap();
    let c = k.cartan_dim();
    let f = &wb.field;
    let mut c_alpha = vec![Scalar::zero(); rs.count()];
    let hi = {
        let mut v = vec![0i64; n];
        v[n - 2] = 1;
        v[n - 1] = 1;
        rs.root_index(&v).unwrap()
    };
    let lo_neg = rs.neg[hi];
    for (t, &alpha) in k.r0_list.iter().enumerate() {
        if alpha != hi && alpha != lo_neg {
            c_alpha[alpha] = Scalar::from_int(t as i64 + 2).add(&Scalar::i());
        }
    }
    // Cartan block killing the constrained direction H_{n-1} + H_n.
    let mut w0 = matrix::zeros(c, c);
    let mut sum_h = vec![Scalar::zero(); n];
    sum_h[n - 2] = Scalar::one();
    sum_h[n - 1] = Scalar::one();
    let coords = matrix::coordinates_in(f, &k.h0, &sum_h).unwrap();
    let free: Vec<usize> = (0..c).filter(|&i| coords[i].is_zero()).collect();
    if free.len() >= 2 {
        w0[free[0]][free[1]] = Scalar::i();
        w0[free[1]][free[0]] = Scalar::i().neg();
    }
    let w = match so_lorentz_form(
        &k,
        &Scalar::from_int(5),
        &Scalar::from_rat(ratio(1, 3)),
        &Scalar::i(),
        &c_alpha,
        &w0,
    ) {
        Ok(w) => w,
        Err(e) => return vec![check("family_instance", false, format!("{e}"))],
    };
    let closed = exterior_derivative(&k, &w).is_zero();
    let sol = match closed_two_forms(&k, bound) {
        Ok(s) => s,
        Err(e) => return vec![check("solver", false, format!("{e}"))],
    };
    let expected = 3 + (k.r0_list.len() - 2) + (c - 1) * (c - 2) / 2;
    vec![
        check("generic_instance_closed", closed, ""),
        check(
            "kernel_matches_parameter_count",
            sol.len() == expected,
            format!("solver {} vs derived count {expected}", sol.len()),
        ),
    ]
}

/// All six reference forms are closed on their subalgebras; the first
/// variant additionally yields an admissible pair.
fn verify_e6_forms() -> Vec<Check> {
    let wb = build_wb(Family::E6, 6);
    let sigma = sigma_e6_f4(&wb);
    let mut all_closed = true;
    let mut info = Vec::new();
    for v in 1..=6 {
        let r0 = e6_variant_roots(&wb, v);
        let k = RegularSubalgebra::new(wb.clone(), full_cartan(&wb), r0).unwrap();
        let c = k.cartan_dim();
        let w = match e6_form(&k, v, &Scalar::from_int(3), &matrix::zeros(c, c)) {
            Ok(w) => w,
            Err(e) => {
                all_closed = false;
                info.push(format!("variant {v}: {e}"));
                continue;
            }
        };
        if !exterior_derivative(&k, &w).is_zero() {
            all_closed = false;
            info.push(format!("variant {v}: not closed"));
        }
    }
    let admissible = {
        let r0 = e6_variant_roots(&wb, 1);
        match construct_h0_pair(&wb, &sigma, r0) {
            Ok(cp) => {
                let k = RegularSubalgebra::new(wb.clone(), cp.h0, r0).unwrap();
                match e6_form(&k, 1, &Scalar::from_int(3), &cp.w0) {
                    Ok(w) => is_admissible(&k, &w, &sigma).admissible,
                    Err(_) => false,
                }
            }
            Err(_) => false,
        }
    };
    vec![
        check(
            "all_variants_closed",
            all_closed,
            if info.is_empty() {
                "six subalgebras".to_string()
            } else {
                info.join("; ")
            },
        ),
        check("variant_one_admissible", admissible, ""),
    ]
}

/// The real part l of every constructed pair is abelian and even
/// dimensional, and the intersection conditions hold.
fn verify_l_abelian() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let cases: [(&str, Family, usize, &str); 3] = [
        ("compact_a4", Family::A, 4, "compact"),
        ("lorentz_d4", Family::D, 4, "lorentz"),
        ("e6_f4", Family::E6, 6, "f4"),
    ];
    for (name, fam, rank, form) in cases {
        let wb = build_wb(fam, rank);
        let (pair, _) = canonical_pair(&wb, form, 1)?;
        let rep = &pair.report;
        let intersect = check_complex_structure_conditions(&pair.k, &pair.sigma);
        let pass = rep.l_abelian && rep.l_dim % 2 == 0 && intersect;
        let name: &'static str = match name {
            "compact_a4" => "compact_a4",
            "lorentz_d4" => "lorentz_d4",
            _ => "e6_f4",
        };
        checks.push(check(name, pass, format!("l dimension {}", rep.l_dim)));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_parsing() {
        assert_eq!(parse_family("a").unwrap(), Family::A);
        assert_eq!(parse_family("E6").unwrap(), Family::E6);
        assert!(parse_family("B").is_err());
    }

    #[test]
    fn verify_ids_resolve() {
        for id in ["weyl-axioms", "thm-main", "cor-type", "prop-bfield"] {
            let (report, pass) = cmd_verify(id, None, None, 200_000, 7).unwrap();
            assert!(pass, "{id}: {report}");
        }
        assert!(cmd_verify("nonsense", None, None, 100, 7).is_err());
    }

    #[test]
    fn quaternionic_coverage_is_reported_failing() {
        // The block types do not exhaust the classes; the verdict must say so.
        let (report, pass) = cmd_verify("clasif1", None, Some(3), 200_000, 7).unwrap();
        assert!(!pass);
        let checks = report["checks"].as_array().unwrap();
        assert!(checks
            .iter()
            .any(|c| c["name"] == "block_types_cover_all_classes" && c["pass"] == false));
        assert!(checks
            .iter()
            .all(|c| c["name"] == "block_types_cover_all_classes" || c["pass"] == true));
    }

    #[test]
    fn classify_and_dump_are_deterministic() {
        let (a, _) = cmd_classify("A", 3, "slH", 200_000).unwrap();
        let (b, _) = cmd_classify("A", 3, "slH", 200_000).unwrap();
        assert_eq!(a, b);
        assert_eq!(a["class_count"], 2);
        let (r, _) = cmd_dump_roots("A", 2).unwrap();
        assert_eq!(r["count"], 6);
    }
}
