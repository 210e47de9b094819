//! Command-line front end: integrations, certifications, class checks,
//! n-sweeps and the identity suite, with pretty/CSV/JSON output.
//!
//! Exit codes: 0 success (and bound holds), 1 bound violated or check
//! failed, 2 parse/specification error, 3 parity error, 4 evaluation
//! error, 5 I/O error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use nchh::bounds::{self, CheckOptions, Hypothesis};
use nchh::classcheck::{self, ClassReport, ClasscheckError, FunctionClass, DEFAULT_T_SAMPLES};
use nchh::errfun::{self, ErrorFunction, PhiError, PhiParseOrBindError};
use nchh::expr::ParseError;
use nchh::interval::{Interval, IntervalError};
use nchh::quadrature::{QuadratureError, Rule};
use nchh::report::{self, SweepRow};
use nchh::{BoundsError, FunctionSpec};

#[derive(Parser)]
#[command(
    name = "nchh",
    version,
    about = "Newton-Cotes integral means with certified error-function envelopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a Newton-Cotes rule to a function
    Integrate(IntegrateArgs),
    /// Produce a bound certificate for the numerical integral mean
    Certify(CertifyArgs),
    /// Empirically verify membership in an approximate class
    CheckClass(CheckClassArgs),
    /// Certify across a range of n and emit a plot-ready table
    Sweep(SweepArgs),
    /// Check the coefficient-sum identities in exact integer arithmetic
    Identities(IdentitiesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Trapezoid,
    Simpson,
    Simpson38,
}

impl From<RuleArg> for Rule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Trapezoid => Rule::Trapezoid,
            RuleArg::Simpson => Rule::Simpson,
            RuleArg::Simpson38 => Rule::Simpson38,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Monotone,
    Holder,
    Convex,
    Affine,
}

impl From<ClassArg> for FunctionClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Monotone => FunctionClass::Monotone,
            ClassArg::Holder => FunctionClass::Holder,
            ClassArg::Convex => FunctionClass::Convex,
            ClassArg::Affine => FunctionClass::Affine,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum FormatArg {
    Pretty,
    Csv,
    Json,
}

#[derive(Args)]
struct IntegrateArgs {
    #[arg(long)]
    rule: RuleArg,
    #[arg(long)]
    n: u32,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    /// Function of x, e.g. "x^2 + 0.5*sin(3*x)"
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Pretty)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Re-seeds noise() terms
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    rule: RuleArg,
    #[arg(long)]
    n: u32,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    /// Error function: "const:EPS", "pow:C,P", "affine:C,D0" or "expr:EXPR-in-d"
    #[arg(long)]
    phi: String,
    #[arg(long)]
    class: ClassArg,
    /// Verify the class hypothesis on a grid before certifying
    #[arg(long)]
    verify: bool,
    /// Grid points for class verification
    #[arg(long, default_value_t = classcheck::DEFAULT_GRID_POINTS)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Pretty)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CheckClassArgs {
    #[arg(long)]
    class: ClassArg,
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long)]
    phi: String,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, default_value_t = classcheck::DEFAULT_GRID_POINTS)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Pretty)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    rule: RuleArg,
    #[arg(long)]
    n_min: u32,
    #[arg(long)]
    n_max: u32,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long)]
    phi: String,
    #[arg(long)]
    class: ClassArg,
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = classcheck::DEFAULT_GRID_POINTS)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Pretty)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct IdentitiesArgs {
    #[arg(long)]
    n_max: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// CLI failure with its contract exit code.
#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn parity(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }

    fn eval(message: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Self {
            code: 5,
            message: message.into(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<IntervalError> for CliError {
    fn from(e: IntervalError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<PhiParseOrBindError> for CliError {
    fn from(e: PhiParseOrBindError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<PhiError> for CliError {
    fn from(e: PhiError) -> Self {
        CliError::eval(e.to_string())
    }
}

impl From<QuadratureError> for CliError {
    fn from(e: QuadratureError) -> Self {
        match e {
            QuadratureError::Parity { .. } => CliError::parity(e.to_string()),
            QuadratureError::Partition(_) => CliError::parity(e.to_string()),
            _ => CliError::eval(e.to_string()),
        }
    }
}

impl From<ClasscheckError> for CliError {
    fn from(e: ClasscheckError) -> Self {
        match e {
            ClasscheckError::Grid { .. } => CliError::parse(e.to_string()),
            ClasscheckError::Eval(_) | ClasscheckError::Phi(_) => CliError::eval(e.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Quadrature(q) => q.into(),
            BoundsError::Class(c) => c.into(),
            BoundsError::Phi(p) => p.into(),
            BoundsError::Eval(ev) => CliError::eval(ev.to_string()),
            BoundsError::UnsupportedClassRule { .. }
            | BoundsError::UnsupportedNFreeClass { .. }
            | BoundsError::NotSuperadditive { .. }
            | BoundsError::SuperadditivityUnproven { .. } => CliError::parse(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Integrate(args) => cmd_integrate(args),
        Command::Certify(args) => cmd_certify(args),
        Command::CheckClass(args) => cmd_check_class(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Identities(args) => cmd_identities(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn timestamp() -> String {
    chrono::Utc::now()
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn parse_inputs(
    f_text: &str,
    a: f64,
    b: f64,
    seed: u64,
) -> Result<(FunctionSpec, Interval), CliError> {
    let f = FunctionSpec::parse(f_text)?.with_seed(seed);
    let interval = Interval::new(a, b)?;
    Ok((f, interval))
}

fn cmd_integrate(args: IntegrateArgs) -> Result<u8, CliError> {
    let (f, interval) = parse_inputs(&args.f, args.a, args.b, args.seed)?;
    let rule: Rule = args.rule.into();
    let result = rule.apply(&f, &interval, args.n)?;
    let content = match args.format {
        FormatArg::Pretty => format!(
            "rule:  {}\nn:     {}\nvalue: {}\nmean:  {}\n",
            result.rule, result.n, result.value, result.mean
        ),
        FormatArg::Csv => format!(
            "rule,n,a,b,f,value,mean\n{},{},{},{},{},{},{}\n",
            result.rule,
            result.n,
            report::format_f64(interval.a()),
            report::format_f64(interval.b()),
            args.f,
            report::format_f64(result.value),
            report::format_f64(result.mean)
        ),
        FormatArg::Json => {
            let doc = json!({
                "schema": report::SCHEMA_VERSION,
                "timestamp": timestamp(),
                "f": args.f,
                "a": interval.a(),
                "b": interval.b(),
                "rule": result.rule.name(),
                "n": result.n,
                "value": result.value,
                "mean": result.mean,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
    };
    emit(&args.out, &content)?;
    Ok(0)
}

fn cmd_certify(args: CertifyArgs) -> Result<u8, CliError> {
    let (f, interval) = parse_inputs(&args.f, args.a, args.b, args.seed)?;
    let phi = ErrorFunction::parse(&args.phi, &interval)?;
    let rule: Rule = args.rule.into();
    let class: FunctionClass = args.class.into();
    let opts = CheckOptions {
        grid_points: args.grid,
        t_samples: DEFAULT_T_SAMPLES,
    };
    let cert = bounds::certify(&f, &phi, class, rule, &interval, args.n, args.verify, &opts)?;
    let content = match args.format {
        FormatArg::Pretty => pretty_certificate(&cert, &args.f, &interval),
        FormatArg::Csv => report::certificate_csv(&cert, &args.f, &interval),
        FormatArg::Json => report::certificate_json(&cert, &args.f, &interval, &timestamp()),
    };
    emit(&args.out, &content)?;
    Ok(if cert.holds { 0 } else { 1 })
}

fn pretty_certificate(
    cert: &nchh::BoundCertificate,
    f_label: &str,
    interval: &Interval,
) -> String {
    let mut s = format!(
        "certificate\n  rule:       {}\n  n:          {}\n  class:      {}\n  theorem:    {}\n  f:          {}\n  phi:        {}\n  interval:   {}\n  mean:       {}\n  lower:      {}\n  upper:      {}\n  margins:    [{}, {}]\n  holds:      {}\n  n_free:     {}\n  hypothesis: {}\n",
        cert.rule,
        cert.n,
        cert.class,
        cert.theorem,
        f_label,
        cert.phi,
        interval,
        cert.mean,
        cert.lower,
        cert.upper,
        cert.margin_lower,
        cert.margin_upper,
        cert.holds,
        cert.n_free,
        cert.hypothesis.as_str()
    );
    if cert.lower > cert.upper {
        s.push_str("  note: envelope is empty (lower > upper); the class hypothesis fails for this input\n");
    }
    if cert.hypothesis == Hypothesis::Failed {
        s.push_str("  note: class hypothesis failed grid verification\n");
    }
    s
}

fn run_class_check(
    class: FunctionClass,
    f: &FunctionSpec,
    phi: &ErrorFunction,
    interval: &Interval,
    grid: usize,
) -> Result<ClassReport, ClasscheckError> {
    match class {
        FunctionClass::Monotone => classcheck::verify_monotone(f, phi, interval, grid),
        FunctionClass::Holder => classcheck::verify_holder(f, phi, interval, grid),
        FunctionClass::Convex => {
            classcheck::verify_convex(f, phi, interval, grid, DEFAULT_T_SAMPLES)
        }
        FunctionClass::Affine => {
            classcheck::verify_affine(f, phi, interval, grid, DEFAULT_T_SAMPLES)
        }
    }
}

fn cmd_check_class(args: CheckClassArgs) -> Result<u8, CliError> {
    let (f, interval) = parse_inputs(&args.f, args.a, args.b, args.seed)?;
    let phi = ErrorFunction::parse(&args.phi, &interval)?;
    let class: FunctionClass = args.class.into();
    let rep = run_class_check(class, &f, &phi, &interval, args.grid)?;
    let witness_t = rep
        .witness
        .t
        .map(|t| t.to_string())
        .unwrap_or_else(|| "-".to_string());
    let content = match args.format {
        FormatArg::Pretty => format!(
            "class check\n  class:           {}\n  f:               {}\n  phi:             {}\n  interval:        {}\n  verdict:         {}\n  worst_violation: {}\n  witness:         (x={}, y={}, t={})\n  samples_checked: {}\n",
            rep.class,
            args.f,
            args.phi,
            interval,
            if rep.pass { "pass" } else { "fail" },
            rep.worst_violation,
            rep.witness.x,
            rep.witness.y,
            witness_t,
            rep.samples_checked
        ),
        FormatArg::Csv => format!(
            "class,verdict,worst_violation,witness_x,witness_y,witness_t,samples_checked\n{},{},{},{},{},{},{}\n",
            rep.class,
            if rep.pass { "pass" } else { "fail" },
            report::format_f64(rep.worst_violation),
            report::format_f64(rep.witness.x),
            report::format_f64(rep.witness.y),
            witness_t,
            rep.samples_checked
        ),
        FormatArg::Json => {
            let doc = json!({
                "schema": report::SCHEMA_VERSION,
                "timestamp": timestamp(),
                "f": args.f,
                "phi": args.phi,
                "a": interval.a(),
                "b": interval.b(),
                "class": rep.class.name(),
                "verdict": if rep.pass { "pass" } else { "fail" },
                "worst_violation": rep.worst_violation,
                "witness": {
                    "x": rep.witness.x,
                    "y": rep.witness.y,
                    "t": rep.witness.t,
                },
                "samples_checked": rep.samples_checked,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
    };
    emit(&args.out, &content)?;
    Ok(if rep.pass { 0 } else { 1 })
}

fn cmd_sweep(args: SweepArgs) -> Result<u8, CliError> {
    let (f, interval) = parse_inputs(&args.f, args.a, args.b, args.seed)?;
    let phi = ErrorFunction::parse(&args.phi, &interval)?;
    let rule: Rule = args.rule.into();
    let class: FunctionClass = args.class.into();
    if args.n_min == 0 || args.n_min > args.n_max {
        return Err(CliError::parse(format!(
            "invalid n range: {}..{}",
            args.n_min, args.n_max
        )));
    }
    let opts = CheckOptions {
        grid_points: args.grid,
        t_samples: DEFAULT_T_SAMPLES,
    };
    // The class hypothesis does not depend on n; verify once.
    let hypothesis = if args.verify {
        if run_class_check(class, &f, &phi, &interval, args.grid)?.pass {
            Hypothesis::Verified
        } else {
            Hypothesis::Failed
        }
    } else {
        Hypothesis::Unchecked
    };
    let mut rows = Vec::new();
    for n in args.n_min..=args.n_max {
        if !rule.admits(n) {
            eprintln!("warning: skipping n={n}: not admissible for rule {rule}");
            continue;
        }
        let mut cert = bounds::certify(&f, &phi, class, rule, &interval, n, false, &opts)?;
        cert.hypothesis = hypothesis;
        let e_n = bounds::e_n(&phi, &interval, n)?.value;
        let n2_phi = errfun::n_squared_phi(&phi, &interval, n)?;
        rows.push(SweepRow {
            certificate: cert,
            e_n,
            n2_phi,
        });
    }
    let all_hold = rows.iter().all(|r| r.certificate.holds);
    let content = match args.format {
        FormatArg::Csv => report::sweep_csv(&rows, &args.f, &interval),
        FormatArg::Json => report::sweep_json(&rows, &args.f, &interval, &timestamp()),
        FormatArg::Pretty => {
            let mut s = format!(
                "sweep rule={} class={} f={} phi={} interval={}\n{:>5} {:>24} {:>24} {:>24} {:>6} {:>7}\n",
                rule, class, args.f, args.phi, interval, "n", "mean", "lower", "upper", "holds", "n_free"
            );
            for row in &rows {
                let c = &row.certificate;
                s.push_str(&format!(
                    "{:>5} {:>24} {:>24} {:>24} {:>6} {:>7}\n",
                    c.n,
                    format!("{}", c.mean),
                    format!("{}", c.lower),
                    format!("{}", c.upper),
                    c.holds,
                    c.n_free
                ));
            }
            s
        }
    };
    emit(&args.out, &content)?;
    Ok(if all_hold { 0 } else { 1 })
}

fn cmd_identities(args: IdentitiesArgs) -> Result<u8, CliError> {
    let checks = bounds::identity_suite(args.n_max);
    // Aggregate per family, preserving first-seen order.
    let mut families: Vec<(&'static str, usize, usize)> = Vec::new();
    for check in &checks {
        match families.iter_mut().find(|(name, _, _)| *name == check.family) {
            Some((_, passed, total)) => {
                *total += 1;
                if check.pass {
                    *passed += 1;
                }
            }
            None => families.push((check.family, usize::from(check.pass), 1)),
        }
    }
    let mut content = format!("identity suite up to n_max={}\n", args.n_max);
    let mut all_pass = true;
    for (name, passed, total) in &families {
        content.push_str(&format!("  {name}: {passed}/{total} pass\n"));
        all_pass &= passed == total;
    }
    emit(&args.out, &content)?;
    Ok(if all_pass { 0 } else { 1 })
}
