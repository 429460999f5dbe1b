use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lgisog_core::cmtools::{cm_guard, isogenous_order_ratio_check, reduced_forms};
use lgisog_core::ellcurves::{
    curve_from_j_over, default_modpoly_dir, elkies7_j, elkies7_point_search, global_isogeny_test,
    load_modular_polynomial, local_scan, modpoly_path, ModularPolynomial, QuadFieldElem,
};
use lgisog_core::grouplab::{enumerate_exceptional_with, ScanMode, ScanOptions, ScanStrategy};
use lgisog_core::modcurves::{
    cusp_galois_stability, finiteness_frontier, genus_closed, genus_from_cosets_named, CurveKind,
};
use lgisog_core::survey::{
    elkies7_survey, exceptional_bound, five_infinitude_check, prime_window, semistable_degree,
    survey, JClass, NumberFieldDesc, DEFAULT_BOUND,
};
use lgisog_core::{Error, ModPolyError};

#[derive(Parser)]
#[command(name = "lgisog", version, about = "Local and global l-isogeny toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Closed,
    Cosets,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Exhaustive,
    Targeted,
}

#[derive(Subcommand)]
enum Cmd {
    /// l_K = max(|disc|, 6d + 1)
    Bound {
        #[arg(long)]
        degree: u64,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Primes l = 3 mod 4 with 7 <= l <= 6d + 1
    Window {
        #[arg(long)]
        degree: u64,
    },
    /// Exceptional subgroups of GL2(F_l) and the lemma checks
    GroupScan {
        #[arg(long)]
        ell: u32,
        #[arg(long, default_value = "all")]
        mode: String,
        #[arg(long, value_enum)]
        strategy: Option<Strategy>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Genus of X_G(l) by closed formula and/or coset action
    Genus {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        kind: String,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Split-normalizer genus >= 2 for 11 <= l <= max
    Frontier {
        #[arg(long, default_value_t = 200)]
        max: u64,
    },
    LocalScan {
        #[arg(long)]
        ell: u64,
        #[arg(long, allow_hyphen_values = true)]
        j: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        field_sqrt: i64,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
    },
    GlobalTest {
        #[arg(long)]
        ell: u32,
        #[arg(long, allow_hyphen_values = true)]
        j: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        field_sqrt: i64,
        #[arg(long)]
        modpoly_dir: Option<PathBuf>,
    },
    /// Point search on v^2 = u^3 - 1715u + 33614 and the induced j-invariants
    Elkies7 {
        #[arg(long)]
        height: u64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        field_sqrt: i64,
        /// Also classify every j at l = 7 with this prime bound
        #[arg(long)]
        survey_bound: Option<u64>,
        #[arg(long)]
        modpoly_dir: Option<PathBuf>,
    },
    /// Galois stability of the distinguished cusp of X_{V4}(5)
    Cusp5,
    Classnum {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    CmCheck {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        degree: u64,
    },
    Semistable {
        #[arg(long)]
        j_class: String,
        #[arg(long)]
        ell: u64,
    },
    Survey {
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        field_sqrt: i64,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        /// One j per line: `n/d`, or `x,y` for x + y sqrt D
        #[arg(long)]
        js: PathBuf,
        #[arg(long)]
        modpoly_dir: Option<PathBuf>,
    },
    /// Cusp certificate plus a concrete candidate at l = 5 over Q(sqrt 5)
    Five {
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        #[arg(long)]
        modpoly_dir: Option<PathBuf>,
    },
    /// Compute Phi_l from q-expansions and write phi_<l>.txt
    ModpolyGen {
        #[arg(long)]
        ell: Vec<u32>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Load and validate phi_<l>.txt
    ModpolyCheck {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        modpoly_dir: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Validation(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ModPoly(
                ModPolyError::Symmetry { .. }
                | ModPolyError::Degree(_)
                | ModPolyError::Kronecker { .. },
            ) => Failure::Validation(json!({"error": e.to_string()})),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = Result<Value, Failure>;

fn phi(ell: u32, dir: &Option<PathBuf>) -> Result<ModularPolynomial, Failure> {
    let dir = dir.clone().unwrap_or_else(default_modpoly_dir);
    Ok(load_modular_polynomial(ell, &dir)?)
}

fn check(ok: bool, v: Value) -> CmdResult {
    if ok {
        Ok(v)
    } else {
        Err(Failure::Validation(v))
    }
}

fn read_js(path: &Path, d: i64) -> Result<Vec<QuadFieldElem>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(|l| QuadFieldElem::parse_in_field(l, d).map_err(Failure::from))
        .collect()
}

fn run(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Bound { degree, disc } => {
            let k = NumberFieldDesc::general(degree, disc)?;
            Ok(json!({"degree": degree, "disc": disc, "bound": exceptional_bound(&k)}))
        }
        Cmd::Window { degree } => {
            if degree == 0 {
                return Err(Failure::Input("degree must be at least 1".into()));
            }
            Ok(json!({"degree": degree, "window": prime_window(degree)}))
        }
        Cmd::GroupScan {
            ell,
            mode,
            strategy,
            out,
        } => {
            let mode: ScanMode = mode.parse()?;
            let opts = ScanOptions {
                strategy: strategy.map(|s| match s {
                    Strategy::Exhaustive => ScanStrategy::Exhaustive,
                    Strategy::Targeted => ScanStrategy::Targeted,
                }),
                ..ScanOptions::default()
            };
            let report = enumerate_exceptional_with(ell, mode, opts)?;
            let v = report.to_json();
            if let Some(path) = out {
                std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap())
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            check(report.violations.is_empty(), v)
        }
        Cmd::Genus { ell, kind, method } => {
            let kind: CurveKind = kind.parse()?;
            let closed = || genus_closed(ell, kind);
            let cosets = || {
                let l = u32::try_from(ell).map_err(|_| Error::ModulusOutOfRange(ell))?;
                genus_from_cosets_named(l, kind)
            };
            match method {
                Method::Closed => Ok(json!(closed()?)),
                Method::Cosets => Ok(json!(cosets()?)),
                Method::Both => {
                    let a = closed()?;
                    let b = cosets()?;
                    let agree = a.genus == b.genus;
                    check(agree, json!({"closed": a, "cosets": b, "agree": agree}))
                }
            }
        }
        Cmd::Frontier { max } => {
            let rows = finiteness_frontier(max)?;
            let ok = rows.iter().all(|r| r.certified);
            check(ok, json!({"max": max, "all_certified": ok, "rows": rows}))
        }
        Cmd::LocalScan {
            ell,
            j,
            field_sqrt,
            bound,
        } => {
            let j = QuadFieldElem::parse_in_field(&j, field_sqrt)?;
            let e = curve_from_j_over(&j, field_sqrt)?;
            let mut v = local_scan(&e, ell, bound)?.to_json();
            v["j"] = json!(j.to_string());
            Ok(v)
        }
        Cmd::GlobalTest {
            ell,
            j,
            field_sqrt,
            modpoly_dir,
        } => {
            let j = QuadFieldElem::parse_in_field(&j, field_sqrt)?;
            let p = phi(ell, &modpoly_dir)?;
            Ok(json!(global_isogeny_test(&j, field_sqrt, &p)?))
        }
        Cmd::Elkies7 {
            height,
            field_sqrt,
            survey_bound,
            modpoly_dir,
        } => {
            if let Some(bound) = survey_bound {
                let p = phi(7, &modpoly_dir)?;
                let s = elkies7_survey(field_sqrt, height, bound, &p)?;
                return Ok(json!({
                    "field": {"D": field_sqrt},
                    "height": height,
                    "points_found": s.points.len(),
                    "points": s.points,
                    "skipped": s.skipped,
                    "verdicts": s.entries,
                    "candidates": s.candidates,
                }));
            }
            let pts = elkies7_point_search(field_sqrt, height)?;
            let images: Vec<Value> = pts
                .iter()
                .map(|p| match elkies7_j(&p.u, &p.v) {
                    Ok(j) => json!({"u": p.u, "v": p.v, "j": j}),
                    Err(e) => json!({"u": p.u, "v": p.v, "error": e.to_string()}),
                })
                .collect();
            Ok(json!({
                "field": {"D": field_sqrt},
                "height": height,
                "points_found": pts.len(),
                "non_two_torsion": pts.iter().filter(|p| !p.v.is_zero()).count(),
                "points": images,
            }))
        }
        Cmd::Cusp5 => {
            let c = cusp_galois_stability();
            check(c.stable, json!(c))
        }
        Cmd::Classnum { disc } => {
            let forms = reduced_forms(disc)?;
            Ok(json!({
                "D": disc,
                "h": forms.len(),
                "forms": forms.iter().map(|f| [f.a, f.b, f.c]).collect::<Vec<_>>(),
            }))
        }
        Cmd::CmCheck { disc, ell, degree } => {
            let r = isogenous_order_ratio_check(disc, ell)?;
            let mut v = json!(r);
            v["cm_guard"] = json!(cm_guard(ell, degree)?);
            check(r.matches, v)
        }
        Cmd::Semistable { j_class, ell } => {
            let c: JClass = j_class.parse()?;
            Ok(json!({"j_class": c, "ell": ell, "d_prime": semistable_degree(c, ell)?}))
        }
        Cmd::Survey {
            ell,
            field_sqrt,
            bound,
            js,
            modpoly_dir,
        } => {
            let k = NumberFieldDesc::quadratic(field_sqrt)?;
            let js = read_js(&js, field_sqrt)?;
            let ell32 = u32::try_from(ell).map_err(|_| Error::ModulusOutOfRange(ell))?;
            let p = phi(ell32, &modpoly_dir)?;
            let entries = survey(&k, ell, &js, bound, &p)?;
            Ok(json!({
                "field": {"D": field_sqrt, "degree": k.degree, "disc": k.disc},
                "ell": ell,
                "bound": bound,
                "verdicts": entries,
            }))
        }
        Cmd::Five { bound, modpoly_dir } => {
            let p = phi(5, &modpoly_dir)?;
            let r = five_infinitude_check(bound, &p, &[1, 2, 5])?;
            check(r.holds, json!(r))
        }
        Cmd::ModpolyGen { ell, out_dir } => {
            std::fs::create_dir_all(&out_dir)
                .map_err(|e| Failure::Input(format!("{}: {e}", out_dir.display())))?;
            let ells = if ell.is_empty() {
                lgisog_core::ellcurves::SUPPORTED_ELLS.to_vec()
            } else {
                ell
            };
            let mut written = vec![];
            for l in ells {
                let p = ModularPolynomial::compute(l)?;
                let path = modpoly_path(&out_dir, l);
                p.write_file(&path)?;
                written.push(json!({"ell": l, "path": path, "max_digits": p.max_digits()}));
            }
            Ok(json!({"written": written}))
        }
        Cmd::ModpolyCheck { ell, modpoly_dir } => {
            let p = phi(ell, &modpoly_dir)?;
            Ok(json!({"ell": ell, "valid": true, "max_digits": p.max_digits()}))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
            ExitCode::SUCCESS
        }
        Err(Failure::Validation(v)) => {
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            println!("{}", json!({"error": msg}));
            ExitCode::from(2)
        }
    }
}
