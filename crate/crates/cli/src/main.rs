mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use t3dt::complexes::{
    adjoint_operator, build_t3_complex, cohomology_ranks, orientation_suite, torsion, BasedComplex, BlockSelector,
    HomologyReps, OperatorTriple,
};
use t3dt::exact::{ExactMatrix, GaussianRational};
use t3dt::exp_map::{
    check_stabiliser_preservation, eig_partition, exp_class_partition, is_etale, random_eigen_list, LieEigenvalue,
};
use t3dt::group_data::{centre_structure, component_action, levi_descriptor, partitions_of, GroupKind, Partition};
use t3dt::integrality::{bps_rank, dt_cohomology, is_prime, langlands_check, levi_contribution, verify_integrality};
use t3dt::moduli::{
    eta2_fiber_size, is_bad_point, is_generic, sl_pgl_fiber, stratum_of, theta_fiber, twisted_component_data,
    twisted_normal_form, twisted_orbit_size, PointKind, SymPoint,
};
use t3dt::molien::ParityConvention;
use t3dt::Error;

#[derive(Parser, Debug)]
#[command(name = "t3dt", version, about = "Exact DT integrality checks for local systems on the 3-torus")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Top degree of every reported series.
    #[arg(long, global = true, allow_negative_numbers = true)]
    max_deg: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = ParityArg::Shifted)]
    parity: ParityArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
    Latex,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ParityArg {
    Shifted,
    Unshifted,
    Both,
}

impl ParityArg {
    fn conventions(self) -> Vec<ParityConvention> {
        match self {
            ParityArg::Shifted => vec![ParityConvention::Shifted],
            ParityArg::Unshifted => vec![ParityConvention::Unshifted],
            ParityArg::Both => ParityConvention::BOTH.to_vec(),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            ParityArg::Shifted => "shifted",
            ParityArg::Unshifted => "unshifted",
            ParityArg::Both => "both",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graded dimension of the DT cohomology of the moduli of rank-n local systems.
    Dt {
        #[arg(long, value_parser = parse_kind)]
        kind: GroupKind,
        #[arg(long)]
        n: usize,
    },
    #[command(subcommand)]
    Verify(VerifyCmd),
    #[command(subcommand)]
    Complex(ComplexCmd),
    #[command(subcommand)]
    Strata(StrataCmd),
    #[command(subcommand)]
    Exp(ExpCmd),
    /// Torus rank and component group of the centre of a Levi.
    Centre {
        #[arg(long, value_parser = parse_kind)]
        kind: GroupKind,
        #[arg(long, value_parser = parse_partition)]
        partition: Partition,
    },
    /// Number of degree-k monomials in l variables.
    BpsRank {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        k: u64,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Levi sum against the plethystic exponential of the BPS blocks.
    Integrality {
        #[arg(long, value_parser = parse_kind)]
        kind: GroupKind,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = -12, allow_negative_numbers = true)]
        min_deg: i64,
    },
    /// SL_n against twisted PGL_n for prime n.
    Langlands {
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 5, 7])]
        primes: Vec<usize>,
        #[arg(long, default_value_t = -12, allow_negative_numbers = true)]
        min_deg: i64,
    },
}

#[derive(Subcommand, Debug)]
enum ComplexCmd {
    /// Homology ranks of a complex, operator triple or monodromy triple.
    Ranks { file: PathBuf },
    /// Torsion of a based complex, or the u_± orientation suite.
    Torsion {
        #[arg(required_unless_present = "orientation_check")]
        file: Option<PathBuf>,
        #[arg(long)]
        orientation_check: bool,
        #[arg(long, requires = "orientation_check")]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum StrataCmd {
    /// Stratum, genericity and bad-locus membership of a point.
    Classify { file: PathBuf },
    /// Cover degrees over a point.
    Fibers { file: PathBuf },
    /// Normal form of a twisted class in (Z/n)^3.
    Twisted {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        class: Vec<i64>,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand, Debug)]
enum ExpCmd {
    /// Étale and stabiliser checks on an eigenvalue list, or on random lists.
    Check {
        #[arg(required_unless_present = "random")]
        file: Option<PathBuf>,
        /// Number of seeded random lists to test instead of a file.
        #[arg(long)]
        random: Option<usize>,
    },
}

fn parse_kind(s: &str) -> Result<GroupKind, String> {
    s.parse::<GroupKind>().map_err(|e| e.to_string())
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse::<Partition>().map_err(|e| e.to_string())
}

/// Failure categories, mapped to exit codes 1 and 2.
enum Failure {
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// A report plus whether every asserted identity held.
struct Report {
    value: Value,
    ok: bool,
}

fn ser<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Input(format!("invalid {what}: {e}")))
}

fn need_seed(g: &Global) -> Result<u64, Failure> {
    g.seed.ok_or_else(|| Failure::Input("this randomized check needs an explicit --seed".into()))
}

fn cmd_dt(g: &Global, kind: GroupKind, n: usize) -> Result<Report, Failure> {
    let max_deg = g.max_deg.unwrap_or(30);
    let mut per_parity = Vec::new();
    for parity in g.parity.conventions() {
        let mut levis = Vec::new();
        for lam in partitions_of(n) {
            if kind == GroupKind::Pgl && !is_prime(n as u64) {
                break;
            }
            let c = levi_contribution(kind, n, &lam, parity, max_deg)?;
            levis.push(json!({"partition": ser(&lam), "contribution": ser(&c.truncated(max_deg))}));
        }
        let series = dt_cohomology(kind, n, parity, max_deg, false)?.truncated(max_deg);
        let mut entry = json!({"parity": parity.as_str(), "levi": levis, "series": ser(&series)});
        if kind == GroupKind::Pgl {
            let (count, twisted) = twisted_component_data(n as u64)?;
            let total = dt_cohomology(kind, n, parity, max_deg, true)?.truncated(max_deg);
            entry["twisted"] = json!({"components": count, "series": ser(&twisted), "total": ser(&total)});
        }
        per_parity.push(entry);
    }
    Ok(Report { value: json!({"results": per_parity}), ok: true })
}

fn cmd_verify(g: &Global, cmd: &VerifyCmd) -> Result<Report, Failure> {
    let hi = g.max_deg.unwrap_or(30);
    let mut ok = true;
    let mut reports = Vec::new();
    match cmd {
        VerifyCmd::Integrality { kind, max_n, min_deg } => {
            for parity in g.parity.conventions() {
                let r = verify_integrality(*kind, *max_n, (*min_deg, hi), parity)?;
                ok &= r.all_equal();
                reports.push(ser(&r));
            }
        }
        VerifyCmd::Langlands { primes, min_deg } => {
            for &p in primes {
                for parity in g.parity.conventions() {
                    let r = langlands_check(p, (*min_deg, hi), parity)?;
                    ok &= r.equal && r.twisted_difference_ok;
                    reports.push(ser(&r));
                }
            }
        }
    }
    Ok(Report { value: json!({"reports": reports, "all_ok": ok}), ok })
}

/// A complex file, an operator triple `{"operators": [...]}`, or a monodromy
/// triple `{"monodromy": [...], "levi": [...]}`.
fn load_complex(path: &Path) -> Result<(BasedComplex, Option<HomologyReps>, Value), Failure> {
    let mut v = read_json(path)?;
    let obj = v.as_object_mut().ok_or_else(|| Failure::Input("expected a JSON object".into()))?;
    if obj.contains_key("dims") {
        let h = match obj.remove("homology") {
            Some(h) => Some(from_value::<HomologyReps>(h, "homology representatives")?),
            None => None,
        };
        let c: BasedComplex = from_value(v, "complex")?;
        return Ok((c, h, json!("complex")));
    }
    let (ops, source) = if let Some(ops) = obj.remove("operators") {
        let ops: Vec<ExactMatrix> = from_value(ops, "operators")?;
        (ops, json!("operators"))
    } else if let Some(mono) = obj.remove("monodromy") {
        let xs: Vec<ExactMatrix> = from_value(mono, "monodromy")?;
        let selector = match obj.remove("levi") {
            Some(l) => BlockSelector::OffBlock(from_value(l, "levi partition")?),
            None => BlockSelector::Full,
        };
        let ops = xs.iter().map(|x| adjoint_operator(x, &selector)).collect::<Result<Vec<_>, _>>()?;
        let label = match &selector {
            BlockSelector::Full => json!("adjoint"),
            BlockSelector::OffBlock(l) => json!({"off_block": ser(l)}),
        };
        (ops, label)
    } else {
        return Err(Failure::Input("expected \"dims\", \"operators\" or \"monodromy\"".into()));
    };
    let [t1, t2, t3]: [ExactMatrix; 3] =
        ops.try_into().map_err(|_| Failure::Input("expected exactly three matrices".into()))?;
    let triple = OperatorTriple::new(t1, t2, t3)?;
    Ok((build_t3_complex(&triple), None, source))
}

fn cmd_complex(g: &Global, cmd: &ComplexCmd) -> Result<Report, Failure> {
    match cmd {
        ComplexCmd::Ranks { file } => {
            let (c, _, source) = load_complex(file)?;
            let ranks = cohomology_ranks(&c);
            let chi: i64 =
                ranks.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
            let ok = chi == c.euler_characteristic();
            Ok(Report {
                value: json!({"source": source, "dims": c.dims(), "ranks": ranks, "euler_characteristic": chi}),
                ok,
            })
        }
        ComplexCmd::Torsion { file: _, orientation_check: true, n, samples } => {
            let seed = need_seed(g)?;
            let n = n.ok_or_else(|| Failure::Input("--orientation-check needs --n".into()))?;
            if n < 2 {
                return Err(Failure::Input("--n must be at least 2".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let results = orientation_suite(n, *samples, &mut rng)?;
            let ok = results.iter().all(|s| s.torsion == GaussianRational::one());
            Ok(Report { value: json!({"samples": ser(&results), "all_one": ok}), ok })
        }
        ComplexCmd::Torsion { file, .. } => {
            let file = file.as_ref().ok_or_else(|| Failure::Input("a complex file is required".into()))?;
            let (c, h, source) = load_complex(file)?;
            let t = torsion(&c, h.as_ref())?;
            Ok(Report { value: json!({"source": source, "dims": c.dims(), "torsion": ser(&t)}), ok: true })
        }
    }
}

fn load_point(path: &Path) -> Result<SymPoint, Failure> {
    from_value(read_json(path)?, "point")
}

fn cmd_strata(cmd: &StrataCmd) -> Result<Report, Failure> {
    match cmd {
        StrataCmd::Classify { file } => {
            let p = load_point(file)?;
            let n = p.n() as u64;
            let mut v = json!({
                "kind": ser(&p.kind),
                "n": n,
                "stratum": ser(&stratum_of(&p)),
                "generic": is_generic(&p),
            });
            if p.kind == PointKind::Sl && is_prime(n) {
                v["bad"] = json!(is_bad_point(&p, n)?);
            }
            Ok(Report { value: v, ok: true })
        }
        StrataCmd::Fibers { file } => {
            let p = load_point(file)?;
            let n = p.n() as u64;
            let lam = stratum_of(&p);
            let mut v = json!({"kind": ser(&p.kind), "n": n, "stratum": ser(&lam)});
            let mut ok = true;
            match p.kind {
                PointKind::Gl => {
                    let fiber = theta_fiber(&p, &lam)?.len() as u64;
                    let w = levi_descriptor(GroupKind::Gl, &lam).weyl_order;
                    ok &= fiber == w;
                    v["theta_fiber"] = json!(fiber);
                    v["weyl_order"] = json!(w);
                    v["eta2_fiber"] = json!(eta2_fiber_size(&p, n)?);
                }
                PointKind::Sl => {
                    let bad = is_bad_point(&p, n)?;
                    let f = sl_pgl_fiber(&p, n)?;
                    if !bad {
                        ok &= f as u64 == n * n * n;
                    }
                    v["bad"] = json!(bad);
                    v["sl_pgl_fiber"] = json!(f);
                }
            }
            Ok(Report { value: v, ok })
        }
        StrataCmd::Twisted { class, n } => {
            let v: [i64; 3] =
                class.clone().try_into().map_err(|_| Failure::Input("--class needs three integers".into()))?;
            let f = twisted_normal_form(v, *n)?;
            let mut out = ser(&f);
            out["orbit_size"] = json!(twisted_orbit_size(*n));
            out["nonzero_classes"] = json!(n * n * n - 1);
            Ok(Report { value: out, ok: true })
        }
    }
}

fn eigen_report(e: &[LieEigenvalue]) -> Value {
    let etale = is_etale(e);
    let preserved = check_stabiliser_preservation(e);
    json!({
        "etale": etale,
        "eig_partition": ser(&eig_partition(e)),
        "exp_class_partition": ser(&exp_class_partition(e)),
        "stabiliser_preserved": preserved,
    })
}

fn cmd_exp(g: &Global, cmd: &ExpCmd) -> Result<Report, Failure> {
    let ExpCmd::Check { file, random } = cmd;
    if let Some(count) = random {
        let mut rng = ChaCha8Rng::seed_from_u64(need_seed(g)?);
        let (mut etale, mut counterexamples) = (0, Vec::new());
        for _ in 0..*count {
            let len = 1 + (rand_chacha::rand_core::RngCore::next_u32(&mut rng) % 6) as usize;
            let e = random_eigen_list(len, &mut rng);
            if is_etale(&e) {
                etale += 1;
                if !check_stabiliser_preservation(&e) {
                    counterexamples.push(ser(&e));
                }
            }
        }
        let ok = counterexamples.is_empty();
        return Ok(Report { value: json!({"lists": count, "etale": etale, "counterexamples": counterexamples}), ok });
    }
    let file = file.as_ref().ok_or_else(|| Failure::Input("an eigenvalue file is required".into()))?;
    let e: Vec<LieEigenvalue> = from_value(read_json(file)?, "eigenvalue list")?;
    let v = eigen_report(&e);
    // étale lists must preserve stabilisers
    let ok = !v["etale"].as_bool().unwrap() || v["stabiliser_preserved"].as_bool().unwrap();
    Ok(Report { value: v, ok })
}

fn cmd_centre(kind: GroupKind, lam: &Partition) -> Result<Report, Failure> {
    let (rank, order) = centre_structure(kind, lam)?;
    let mut v = json!({"torus_rank": rank, "component_group_order": order});
    if kind == GroupKind::Sl {
        let direct = lam.gcd() as u64;
        v["component_action"] = ser(&component_action(lam)?);
        v["gcd_check"] = json!(direct == order);
        return Ok(Report { value: v, ok: direct == order && rank + 1 == lam.len() });
    }
    Ok(Report { value: v, ok: true })
}

fn config(g: &Global, cmd: &Command) -> Value {
    let mut c = match cmd {
        Command::Dt { kind, n } => json!({"subcommand": "dt", "kind": kind.as_str(), "n": n}),
        Command::Verify(VerifyCmd::Integrality { kind, max_n, min_deg }) => {
            json!({"subcommand": "verify integrality", "kind": kind.as_str(), "max_n": max_n, "min_deg": min_deg})
        }
        Command::Verify(VerifyCmd::Langlands { primes, min_deg }) => {
            json!({"subcommand": "verify langlands", "primes": primes, "min_deg": min_deg})
        }
        Command::Complex(ComplexCmd::Ranks { file }) => json!({"subcommand": "complex ranks", "file": file}),
        Command::Complex(ComplexCmd::Torsion { file, orientation_check, n, samples }) => json!({
            "subcommand": "complex torsion",
            "file": file,
            "orientation_check": orientation_check,
            "n": n,
            "samples": samples,
        }),
        Command::Strata(StrataCmd::Classify { file }) => json!({"subcommand": "strata classify", "file": file}),
        Command::Strata(StrataCmd::Fibers { file }) => json!({"subcommand": "strata fibers", "file": file}),
        Command::Strata(StrataCmd::Twisted { class, n }) => {
            json!({"subcommand": "strata twisted", "class": class, "n": n})
        }
        Command::Exp(ExpCmd::Check { file, random }) => {
            json!({"subcommand": "exp check", "file": file, "random": random})
        }
        Command::Centre { kind, partition } => {
            json!({"subcommand": "centre", "kind": kind.as_str(), "partition": ser(partition)})
        }
        Command::BpsRank { l, k } => json!({"subcommand": "bps-rank", "l": l, "k": k}),
    };
    c["seed"] = json!(g.seed);
    c["max_deg"] = json!(g.max_deg);
    c["parity"] = json!(g.parity.as_str());
    c["format"] = json!(format!("{:?}", g.format).to_lowercase());
    c
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Dt { kind, n } => cmd_dt(g, *kind, *n),
        Command::Verify(v) => cmd_verify(g, v),
        Command::Complex(c) => cmd_complex(g, c),
        Command::Strata(s) => cmd_strata(s),
        Command::Exp(e) => cmd_exp(g, e),
        Command::Centre { kind, partition } => cmd_centre(*kind, partition),
        Command::BpsRank { l, k } => {
            let rank = bps_rank(*l, *k)?;
            Ok(Report { value: json!({"rank": rank}), ok: true })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut out = json!({"config": config(&cli.global, &cli.command), "ok": report.ok});
            out["report"] = report.value;
            println!("{}", render::render(&out, cli.global.format));
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}
