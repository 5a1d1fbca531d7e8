//! The `qsc` command-line tool.
//!
//! Results go to stdout, diagnostics to stderr. Every error is reported on a
//! single line starting with `error:<kind>:` and mapped to an exit code:
//! `parse` and `io` give 2, `domain` gives 3, `assertion` gives 4.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use qsc_core::cl_bounds::{
    aspherical_bound, cl_lower_bound_cpn, cl_lower_bound_grassmannian, max_certified_g_grassmannian,
    spectral_certifies, spectral_lower_bound, stable_norm_certificate, BoundCertificate, BoundError,
    HamiltonianProfile, Statement, DEFAULT_MAX_G,
};
use qsc_core::partitions::PartitionError;
use qsc_core::qh_ring::{
    asymptotic_invariant, euler_class, euler_power_invariant, verify_postnikov, ParseClassError, PostnikovCase,
    QHClass, RingError, RingJson, RingParams,
};
use qsc_core::rational::parse_rational;
use qsc_core::sp::{defect_survey, tau, PathGenerator, SpError, SymplecticPath, DEFAULT_K_MAX};

pub const MAX_G_VAR: &str = "QSC_MAX_G";

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Domain(String),
    Assertion(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Assertion(_) => 4,
        }
    }

    fn line(&self) -> String {
        let (kind, msg) = match self {
            CliError::Parse(m) => ("parse", m),
            CliError::Domain(m) => ("domain", m),
            CliError::Assertion(m) => ("assertion", m),
            CliError::Io(m) => ("io", m),
        };
        format!("error:{kind}: {}", msg.replace('\n', " "))
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<ParseClassError> for CliError {
    fn from(e: ParseClassError) -> Self {
        match e {
            ParseClassError::Ring(e) => e.into(),
            ParseClassError::Partition(
                PartitionError::OutsideBox { .. } | PartitionError::TooManyRows { .. },
            ) => CliError::Domain(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::ThresholdDecreased(..) => CliError::Assertion(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<SpError> for CliError {
    fn from(e: SpError) -> Self {
        match e {
            SpError::Generator(_) | SpError::Json(_) => CliError::Parse(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qsc", version, about = "Quantum cohomology of Grassmannians, commutator-length certificates and Sp(2n) rotation numbers")]
struct Cli {
    /// Emit JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel surveys.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RingArgs {
    /// Grassmannian Gr(r,n) as "r,n".
    #[arg(long, value_name = "R,N", conflicts_with = "cpn")]
    ring: Option<String>,
    /// Projective space CP^n, same as --ring 1,n+1.
    #[arg(long, value_name = "N")]
    cpn: Option<usize>,
    /// Area of the positive generator of H_2.
    #[arg(long, default_value = "1", value_parser = rational_arg)]
    area: BigRational,
}

impl RingArgs {
    fn ring(&self) -> Result<RingParams, CliError> {
        let (r, n) = match (&self.ring, self.cpn) {
            (Some(text), _) => parse_ring(text)?,
            (None, Some(m)) => (1, m + 1),
            (None, None) => return Err(CliError::Parse("one of --ring or --cpn is required".into())),
        };
        Ok(RingParams::new(r, n, self.area.clone())?)
    }
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Integral over time of the supremum of the displacing Hamiltonian.
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = rational_arg)]
    sup: BigRational,
    /// Weight of the bump Hamiltonian.
    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
    w: BigRational,
}

impl ProfileArgs {
    fn profile(&self) -> Result<HamiltonianProfile, CliError> {
        Ok(HamiltonianProfile::new(self.sup.clone(), self.w.clone())?)
    }
}

#[derive(Args, Debug)]
struct PathArgs {
    /// Generator spec such as "rotation:theta=1.2", "shear:c=0.5" or "random:seed=42,count=200".
    #[arg(long = "gen", value_name = "SPEC", conflicts_with = "path")]
    generator: Option<String>,
    /// JSON file holding an array of 2n x 2n row-major matrices.
    #[arg(long, value_name = "FILE")]
    path: Vec<PathBuf>,
    /// Number of iterates used for the homogenized estimate.
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    k_max: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum product of two classes.
    Product {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Euler class, checked against chi times the point class.
    Euler {
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Quantum power of a class.
    Power {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        a: String,
        #[arg(long, value_parser = clap::value_parser!(u64))]
        g: u64,
    },
    /// Powers of the point class against their closed forms.
    Postnikov {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        g: u64,
    },
    /// I_g for a given g, or the asymptotic invariant lim I_g/g without --g.
    Invariant {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        g: Option<u64>,
    },
    /// Commutator-length certificate on CP^n.
    BoundCpn {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Commutator-length certificate on a Grassmannian, for one g or the largest one.
    BoundGrass {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        g: Option<u64>,
    },
    /// Lower bound for the stable commutator norm of the bump.
    StableNorm {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        w: BigRational,
    },
    /// Certificate for symplectically aspherical manifolds.
    Aspherical {
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Lower bound for the spectral number of E^g.
    Spectral {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        g: u64,
    },
    /// Homogenized rotation number of symplectic paths.
    SpTau {
        #[command(flatten)]
        paths: PathArgs,
    },
    /// Defect survey over pairs of paths.
    SpSurvey {
        #[command(flatten)]
        paths: PathArgs,
    },
}

fn rational_arg(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_ring(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Parse(format!("ring must be \"r,n\", got {text:?}"));
    let (r, n) = text.split_once(',').ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?))
}

fn max_g() -> Result<u64, CliError> {
    match std::env::var(MAX_G_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_G),
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(g) if g >= 1 => Ok(g),
            _ => Err(CliError::Parse(format!("{MAX_G_VAR} must be a positive integer, got {v:?}"))),
        },
        Err(e) => Err(CliError::Parse(format!("{MAX_G_VAR}: {e}"))),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{}", e.render());
            return 0;
        }
        Err(e) => {
            let detail = e.to_string();
            let msg: Vec<&str> = detail
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(|l| l.trim().trim_start_matches("error: "))
                .filter(|l| !l.is_empty() && !l.starts_with("tip:"))
                .collect();
            let _ = writeln!(err, "{}", CliError::Parse(msg.join(" ")).line());
            return 2;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads as usize).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "{}", CliError::Domain(e.to_string()).line());
            return 3;
        }
    };
    let mut text = String::new();
    let result = pool.install(|| dispatch(&cli, &mut text));
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        let _ = writeln!(err, "{}", CliError::Io("cannot write to stdout".into()).line());
        return 2;
    }
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.line());
            e.exit_code()
        }
    }
}

/// Writes the command output into `out`. Output produced before an
/// assertion failure is kept.
fn dispatch(cli: &Cli, out: &mut String) -> Result<(), CliError> {
    let json = cli.json;
    match &cli.command {
        Command::Product { ring, a, b } => {
            let ring = ring.ring()?;
            let a = QHClass::parse_text(&ring, a)?;
            let b = QHClass::parse_text(&ring, b)?;
            emit_class(out, json, &a.product(&b)?);
        }
        Command::Euler { ring } => {
            let ring = ring.ring()?;
            let e = euler_class(&ring);
            emit_class(out, json, &e);
            let chi = BigRational::from_integer(ring.euler_characteristic());
            let expected = QHClass::point(&ring).scale(&chi);
            if e != expected {
                return Err(CliError::Assertion(format!(
                    "Euler class of {ring} is not chi*m = {}",
                    expected.to_text()
                )));
            }
        }
        Command::Power { ring, a, g } => {
            let ring = ring.ring()?;
            let a = QHClass::parse_text(&ring, a)?;
            emit_class(out, json, &a.power(*g));
        }
        Command::Postnikov { ring, g } => {
            let ring = ring.ring()?;
            let report = verify_postnikov(&ring, *g);
            if json {
                let forms: Vec<Value> = report
                    .closed_forms
                    .iter()
                    .map(|(case, class)| {
                        let mut v = case_json(case);
                        v["class"] = to_value(&class.to_json());
                        v
                    })
                    .collect();
                push_json(
                    out,
                    &json!({
                        "ring": to_value(&RingJson::from(&ring)),
                        "g": g,
                        "computed": to_value(&report.computed.to_json()),
                        "closed_forms": forms,
                        "matches": report.matches(),
                        "forms_agree": report.forms_agree(),
                    }),
                );
            } else {
                let mut rows = vec![
                    ("ring".to_string(), ring.to_string()),
                    ("g".to_string(), g.to_string()),
                    ("m^g".to_string(), report.computed.to_text()),
                ];
                for (case, class) in &report.closed_forms {
                    let label = match case {
                        PostnikovCase::RowBlock { a, b } => format!("rows a={a} b={b}"),
                        PostnikovCase::ColumnBlock { c, d } => format!("columns c={c} d={d}"),
                    };
                    rows.push((label, class.to_text()));
                }
                rows.push(("matches".to_string(), yes_no(report.matches())));
                rows.push(("forms agree".to_string(), yes_no(report.forms_agree())));
                push_table(out, &rows);
            }
            if !report.matches() || !report.forms_agree() {
                return Err(CliError::Assertion(format!("closed forms disagree with m^{g} on {ring}")));
            }
        }
        Command::Invariant { ring, g } => {
            let ring = ring.ring()?;
            let ring_json = to_value(&RingJson::from(&ring));
            match g {
                Some(g) => {
                    let value = euler_power_invariant(&ring, *g)?;
                    emit_scalar(out, json, json!({"ring": ring_json, "g": g, "invariant": value.to_string()}), &value);
                }
                None => {
                    let value = asymptotic_invariant(&ring);
                    emit_scalar(out, json, json!({"ring": ring_json, "asymptotic": value.to_string()}), &value);
                }
            }
        }
        Command::BoundCpn { ring, profile } => {
            let ring = ring.ring()?;
            if ring.r() != 1 {
                return Err(CliError::Domain(format!("{ring} is not a projective space; use bound-grass")));
            }
            let cert = cl_lower_bound_cpn(ring.n() - 1, ring.area(), &profile.profile()?, max_g()?)?;
            emit_certificate(out, json, &cert);
        }
        Command::BoundGrass { ring, profile, g } => {
            let ring = ring.ring()?;
            let profile = profile.profile()?;
            let cert = match g {
                Some(g) => cl_lower_bound_grassmannian(&ring, &profile, *g)?,
                None => max_certified_g_grassmannian(&ring, &profile, max_g()?)?,
            };
            emit_certificate(out, json, &cert);
        }
        Command::StableNorm { ring, w } => {
            let ring = ring.ring()?;
            let cert = stable_norm_certificate(&ring, w)?;
            if json {
                out.push_str(&cert.to_json_string());
                out.push('\n');
            } else if let Statement::StableNormAtLeast(v) = &cert.statement {
                out.push_str(&format!("{v}\n"));
            }
        }
        Command::Aspherical { profile } => {
            emit_certificate(out, json, &aspherical_bound(&profile.profile()?));
        }
        Command::Spectral { ring, profile, g } => {
            let ring = ring.ring()?;
            let bound = spectral_lower_bound(&ring, &profile.profile()?, *g)?;
            let value = json!({
                "ring": to_value(&RingJson::from(&ring)),
                "g": g,
                "bound": bound.to_string(),
                "certifies": spectral_certifies(&bound),
            });
            emit_scalar(out, json, value, &bound);
        }
        Command::SpTau { paths } => {
            let list = load_paths(paths)?;
            let estimates = list
                .iter()
                .map(|p| tau(p, paths.k_max))
                .collect::<Result<Vec<_>, _>>()?;
            if json {
                let items: Vec<Value> = estimates
                    .iter()
                    .map(|e| json!({"tau": e.value, "partial": e.partial}))
                    .collect();
                push_json(out, &json!({"k_max": paths.k_max, "estimates": items}));
            } else if let [e] = estimates.as_slice() {
                push_table(
                    out,
                    &[
                        ("tau".to_string(), e.value.to_string()),
                        ("tau_det".to_string(), e.partial[0].to_string()),
                        ("k_max".to_string(), e.k_max().to_string()),
                    ],
                );
            } else {
                let mut rows = vec![vec!["path".to_string(), "tau".to_string(), "tau_det".to_string()]];
                for (i, e) in estimates.iter().enumerate() {
                    rows.push(vec![i.to_string(), e.value.to_string(), e.partial[0].to_string()]);
                }
                push_columns(out, &rows);
            }
        }
        Command::SpSurvey { paths } => {
            let pairs = load_pairs(paths)?;
            let stats = defect_survey(&pairs, paths.k_max)?;
            if json {
                push_json(out, &to_value(&stats));
            } else {
                let histogram: Vec<String> = stats.histogram.iter().map(usize::to_string).collect();
                push_table(
                    out,
                    &[
                        ("pairs".to_string(), stats.count.to_string()),
                        ("k_max".to_string(), stats.k_max.to_string()),
                        ("max defect".to_string(), stats.max.to_string()),
                        ("mean defect".to_string(), stats.mean.to_string()),
                        ("bin width".to_string(), stats.bin_width.to_string()),
                        ("histogram".to_string(), histogram.join(" ")),
                    ],
                );
            }
        }
    }
    Ok(())
}

fn read_path(file: &PathBuf) -> Result<SymplecticPath, CliError> {
    let text =
        std::fs::read_to_string(file).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
    Ok(SymplecticPath::from_json_str(&text)?)
}

fn load_paths(args: &PathArgs) -> Result<Vec<SymplecticPath>, CliError> {
    match &args.generator {
        Some(spec) => Ok(spec.parse::<PathGenerator>()?.paths()),
        None if !args.path.is_empty() => args.path.iter().map(read_path).collect(),
        None => Err(CliError::Parse("one of --gen or --path is required".into())),
    }
}

fn load_pairs(args: &PathArgs) -> Result<Vec<(SymplecticPath, SymplecticPath)>, CliError> {
    match (&args.generator, args.path.as_slice()) {
        (Some(spec), _) => Ok(spec.parse::<PathGenerator>()?.pairs()),
        (None, [a, b]) => Ok(vec![(read_path(a)?, read_path(b)?)]),
        (None, []) => Err(CliError::Parse("one of --gen or --path is required".into())),
        (None, _) => Err(CliError::Parse("a survey from files needs exactly two --path arguments".into())),
    }
}

fn case_json(case: &PostnikovCase) -> Value {
    match case {
        PostnikovCase::RowBlock { a, b } => json!({"case": "rows", "a": a, "b": b}),
        PostnikovCase::ColumnBlock { c, d } => json!({"case": "columns", "c": c, "d": d}),
    }
}

fn to_value<T: serde::Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn push_json(out: &mut String, value: &Value) {
    out.push_str(&value.to_string());
    out.push('\n');
}

fn emit_class(out: &mut String, json: bool, class: &QHClass) {
    if json {
        out.push_str(&class.to_json_string());
        out.push('\n');
    } else {
        out.push_str(&class.to_text());
        out.push('\n');
    }
}

fn emit_scalar(out: &mut String, json: bool, value: Value, scalar: &BigRational) {
    if json {
        push_json(out, &value);
    } else {
        out.push_str(&format!("{scalar}\n"));
    }
}

fn emit_certificate(out: &mut String, json: bool, cert: &BoundCertificate) {
    if json {
        out.push_str(&cert.to_json_string());
        out.push('\n');
        return;
    }
    let statement = match &cert.statement {
        Statement::ClGreaterThan(g) => format!("cl > {g}"),
        Statement::StableNormAtLeast(v) => format!("stable norm >= {v}"),
        Statement::None => "none".to_string(),
    };
    let mut rows = vec![
        ("statement".to_string(), statement),
        ("threshold".to_string(), cert.threshold.to_string()),
        ("theorem".to_string(), cert.theorem.id().to_string()),
    ];
    for (i, p) in cert.preconditions.iter().enumerate() {
        let key = if i == 0 { "assumes" } else { "" };
        rows.push((key.to_string(), p.clone()));
    }
    push_table(out, &rows);
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn push_table(out: &mut String, rows: &[(String, String)]) {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in rows {
        let line = format!("{k:<width$}  {v}");
        out.push_str(line.trim_end());
        out.push('\n');
    }
}

fn push_columns(out: &mut String, rows: &[Vec<String>]) {
    let cols = rows.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    for row in rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(v, w)| format!("{v:>w$}")).collect();
        out.push_str(&cells.join("  "));
        out.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("qsc").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ring_flag_parsing() {
        assert_eq!(parse_ring("2,4").unwrap(), (2, 4));
        assert_eq!(parse_ring(" 1 , 3").unwrap(), (1, 3));
        assert!(parse_ring("2").is_err());
        assert!(parse_ring("a,b").is_err());
    }

    #[test]
    fn cpn_sugar() {
        let a = call(&["product", "--cpn", "2", "--a", "s[1]", "--b", "s[1]"]);
        let b = call(&["product", "--ring", "1,3", "--a", "s[1]", "--b", "s[1]"]);
        assert_eq!(a, b);
        assert_eq!(a.1, "s[2]\n");
    }

    #[test]
    fn error_lines_carry_prefix() {
        let (code, out, err) = call(&["product", "--ring", "2,4", "--a", "s[3]", "--b", "1"]);
        assert_eq!(code, 3);
        assert!(out.is_empty());
        assert!(err.starts_with("error:domain: "), "{err}");
        assert_eq!(err.lines().count(), 1);
        let (code, _, err) = call(&["product", "--ring", "2,4", "--a", "s[1", "--b", "1"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error:parse: "), "{err}");
    }

    #[test]
    fn tables_are_aligned() {
        let mut out = String::new();
        push_table(&mut out, &[("a".into(), "1".into()), ("long key".into(), "2".into())]);
        assert_eq!(out, "a         1\nlong key  2\n");
        let mut out = String::new();
        push_columns(&mut out, &[vec!["x".into(), "yy".into()], vec!["10".into(), "3".into()]]);
        assert_eq!(out, " x  yy\n10   3\n");
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("sp-survey"));
    }

    #[test]
    fn ring_conversions_to_domain_errors() {
        let e: CliError = RingError::InvalidGrassmannian { r: 3, n: 2 }.into();
        assert_eq!(e.exit_code(), 3);
        let e: CliError = SpError::Generator("x".into()).into();
        assert_eq!(e.exit_code(), 2);
        let e: CliError = BoundError::ThresholdDecreased(1, 2).into();
        assert_eq!(e.exit_code(), 4);
    }
}
