//! `hurwitz`: invariant tables, the class of `TR_d`, and verification sweeps.

mod report;
mod suites;

use std::io::Write as _;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hurwitz_core::abelian::{
    ee_half_self_intersection, ee_intersect, enu3_count, sigma_class, theta_pullback_degree,
    u_class, v_class,
};
use hurwitz_core::invariants::{
    a_inv, alpha, b_inv, c_inv, d3_psi_via_degeneration, e_inv, r_inv, rho, F_inv, N1_inv, N2_inv,
    N3_inv, N_inv,
};
use hurwitz_core::oracle::full_torsion_curves;
use hurwitz_core::pic::{
    diaz_class, genus2_coefficients, genus2_rhs, named_classes, reconstruct_d1, M21Class,
};
use hurwitz_core::ratmaps::ratmaps_report;
use hurwitz_core::scalar::{fmt_rat, BigRat};
use hurwitz_core::schubert::{special_product, special_product_integral};
use hurwitz_core::solver::{closed_form, solve_tr_class, ClosedFormVariant, TrClass};

use report::{print_timing, Check, Report, DERIVED};
use suites::Suite;

#[derive(Parser)]
#[command(
    name = "hurwitz",
    version,
    about = "Exact enumerative checks for the divisor of curves with a pencil having two triple points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one enumerative invariant.
    Invariant(InvariantArgs),
    /// Coefficients of TR_d on M_{2d-3}.
    TrClass(TrClassArgs),
    /// Run a verification suite; exit 1 on any mismatch.
    Verify(VerifyArgs),
    /// Products of special Schubert classes on G(1,n).
    Schubert(SchubertArgs),
    /// Intersection numbers on E×E and theta pullbacks.
    Abelian(AbelianArgs),
    /// Torsion counts on elliptic curves over finite fields.
    Oracle(OracleArgs),
    /// The explicit tail covers.
    Ratmaps(JsonFlag),
    /// Divisor classes on M_{2,1}.
    Pic(PicArgs),
}

#[derive(Args)]
struct JsonFlag {
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum InvariantName {
    #[value(name = "a")]
    A,
    #[value(name = "b")]
    B,
    #[value(name = "c")]
    C,
    #[value(name = "e")]
    E,
    #[value(name = "F")]
    F,
    #[value(name = "N")]
    N,
    #[value(name = "N1")]
    N1,
    #[value(name = "N2")]
    N2,
    #[value(name = "N3")]
    N3,
    #[value(name = "r")]
    R,
    #[value(name = "rho")]
    Rho,
    #[value(name = "alpha")]
    Alpha,
}

#[derive(Args)]
struct InvariantArgs {
    name: InvariantName,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    g: Option<i64>,
    #[arg(long)]
    gamma: Option<i64>,
    #[arg(long)]
    a: Option<i64>,
    #[arg(long)]
    b: Option<i64>,
    /// Projective dimension for `rho`.
    #[arg(long)]
    r: Option<i64>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Solver,
    ClosedForm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Corrected,
    AsPrinted,
    HigherdeltasPrinted,
}

impl From<Variant> for ClosedFormVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Corrected => Self::Corrected,
            Variant::AsPrinted => Self::AsPrinted,
            Variant::HigherdeltasPrinted => Self::HigherDeltasPrinted,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Args)]
struct TrClassArgs {
    #[arg(long)]
    d: i64,
    #[arg(long, value_enum, default_value_t = Method::Solver)]
    method: Method,
    /// Closed-form reading; ignored by the solver.
    #[arg(long, value_enum, default_value_t = Variant::Corrected)]
    variant: Variant,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[arg(long, default_value_t = 3)]
    d_min: i64,
    #[arg(long, default_value_t = 8)]
    d_max: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SchubertArgs {
    /// Ambient G(1,n).
    #[arg(long)]
    n: i64,
    /// Codimensions of the special classes, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    classes: Vec<i64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AbelianArgs {
    /// Theta pullback degree for genus g and the maps (b·, c·).
    #[arg(long, requires_all = ["b", "c"])]
    g: Option<usize>,
    #[arg(long)]
    b: Option<i64>,
    #[arg(long)]
    c: Option<i64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = suites::ORACLE_P_MAX)]
    p_max: u64,
    #[arg(long, default_value_t = suites::ORACLE_SAMPLES)]
    samples: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PicArgs {
    /// Also compare the pullback of TR_d with the genus-2 decomposition.
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    json: bool,
}

/// An invalid invocation: exit code 2.
struct Usage(String);

const MAX_D: i64 = 200;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = command_name(&cli.command);
    let outcome = dispatch(cli.command);
    print_timing(name, start.elapsed());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Invariant(_) => "invariant",
        Command::TrClass(_) => "tr-class",
        Command::Verify(_) => "verify",
        Command::Schubert(_) => "schubert",
        Command::Abelian(_) => "abelian",
        Command::Oracle(_) => "oracle",
        Command::Ratmaps(_) => "ratmaps",
        Command::Pic(_) => "pic",
    }
}

fn dispatch(command: Command) -> Result<bool, Usage> {
    match command {
        Command::Invariant(a) => cmd_invariant(a),
        Command::TrClass(a) => cmd_tr_class(a),
        Command::Verify(a) => {
            check_range(a.d_min, a.d_max)?;
            let mut rep = Report::new("verify")
                .param("suite", format!("{:?}", a.suite).to_lowercase())
                .param("d_min", a.d_min)
                .param("d_max", a.d_max);
            rep.checks = suites::run(a.suite, a.d_min, a.d_max);
            Ok(emit(&rep, a.json))
        }
        Command::Schubert(a) => cmd_schubert(a),
        Command::Abelian(a) => cmd_abelian(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Ratmaps(a) => cmd_ratmaps(a.json),
        Command::Pic(a) => cmd_pic(a),
    }
}

fn emit(rep: &Report, json: bool) -> bool {
    if json {
        out_json(&rep.to_json());
    } else {
        out(rep.to_text().trim_end());
    }
    rep.passed()
}

/// Writes a line to stdout; a closed pipe is not an error.
fn out(s: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{s}");
}

fn out_json(v: &Value) {
    out(&serde_json::to_string_pretty(v).expect("string keys only"));
}

fn check_range(d_min: i64, d_max: i64) -> Result<(), Usage> {
    if d_min < 3 || d_max < d_min || d_max > MAX_D {
        return Err(Usage(format!(
            "need 3 <= d-min <= d-max <= {MAX_D}, got {d_min}..{d_max}"
        )));
    }
    Ok(())
}

fn need(v: Option<i64>, flag: &str, name: &str) -> Result<i64, Usage> {
    v.ok_or_else(|| Usage(format!("invariant {name} needs --{flag}")))
}

fn domain(ok: bool, name: &str, requirement: &str) -> Result<(), Usage> {
    if ok {
        Ok(())
    } else {
        Err(Usage(format!("invariant {name} requires {requirement}")))
    }
}

/// Evaluates with panics turned into usage errors: a few formulas are only integral on their domain.
fn guarded(name: &str, f: impl FnOnce() -> String) -> Result<String, Usage> {
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let out = panic::catch_unwind(AssertUnwindSafe(f));
    panic::set_hook(hook);
    out.map_err(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Usage(format!("invariant {name} is undefined here: {msg}"))
    })
}

fn cmd_invariant(a: InvariantArgs) -> Result<bool, Usage> {
    use InvariantName as I;
    let name = a
        .name
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    let n = name.as_str();
    let mut params = Report::new("invariant");
    let value = match a.name {
        I::A | I::B | I::C | I::E => {
            let d = need(a.d, "d", n)?;
            let g = need(a.g, "g", n)?;
            let min_d = if matches!(a.name, I::E) { 3 } else { 2 };
            domain(
                d >= min_d && g >= 1 && 2 * d - g > 0,
                n,
                &format!("d >= {min_d}, g >= 1, 2d-g-1 >= 0"),
            )?;
            params = params.param("d", d).param("g", g);
            match a.name {
                I::A => guarded(n, || a_inv(d, g).to_string())?,
                I::B => guarded(n, || b_inv(d, g).to_string())?,
                I::E => guarded(n, || e_inv(d, g).to_string())?,
                _ => {
                    let gamma = need(a.gamma, "gamma", n)?;
                    domain(gamma >= 1, n, "gamma >= 1")?;
                    params = params.param("gamma", gamma);
                    guarded(n, || c_inv(d, g, gamma).to_string())?
                }
            }
        }
        I::F | I::N | I::N1 | I::N2 | I::N3 | I::Alpha => {
            let d = need(a.d, "d", n)?;
            domain((3..=MAX_D).contains(&d), n, &format!("3 <= d <= {MAX_D}"))?;
            params = params.param("d", d);
            let f: fn(i64) -> hurwitz_core::scalar::BigInt = match a.name {
                I::F => F_inv,
                I::N => N_inv,
                I::N1 => N1_inv,
                I::N2 => N2_inv,
                I::N3 => N3_inv,
                _ => alpha,
            };
            guarded(n, || f(d).to_string())?
        }
        I::R => {
            let (x, y) = (need(a.a, "a", n)?, need(a.b, "b", n)?);
            domain(x >= y && y >= 0, n, "a >= b >= 0")?;
            params = params.param("a", x).param("b", y);
            guarded(n, || r_inv(x, y).to_string())?
        }
        I::Rho => {
            let (g, r, d) = (need(a.g, "g", n)?, need(a.r, "r", n)?, need(a.d, "d", n)?);
            params = params.param("d", d).param("g", g).param("r", r);
            rho(g, r, d).to_string()
        }
    };
    if a.json {
        out_json(&json!({"name": n, "params": params.parameters, "value": value}));
    } else {
        out(&value);
    }
    Ok(true)
}

fn tr_json(t: &TrClass, method: &str, variant: Option<ClosedFormVariant>) -> Value {
    json!({
        "d": t.d.to_string(),
        "g": t.g().to_string(),
        "method": method,
        "variant": variant.map(ClosedFormVariant::name),
        "A": fmt_rat(&t.a),
        "B": t.b.iter().map(fmt_rat).collect::<Vec<_>>(),
        "class": t.to_mg_class().to_string(),
    })
}

fn cmd_tr_class(a: TrClassArgs) -> Result<bool, Usage> {
    if !(3..=MAX_D).contains(&a.d) {
        return Err(Usage(format!(
            "tr-class needs 3 <= d <= {MAX_D}, got {}",
            a.d
        )));
    }
    let (t, method, variant) = match a.method {
        Method::Solver => (solve_tr_class(a.d), "solver", None),
        Method::ClosedForm => {
            let v = ClosedFormVariant::from(a.variant);
            (closed_form(a.d, v), "closed-form", Some(v))
        }
    };
    let t = t.map_err(|e| Usage(e.to_string()))?;
    match a.format {
        Format::Text => out(&t.to_mg_class().to_string()),
        Format::Latex => out(&t.to_latex()),
        Format::Json => out_json(&tr_json(&t, method, variant)),
    }
    Ok(true)
}

fn cmd_schubert(a: SchubertArgs) -> Result<bool, Usage> {
    let product = special_product(a.n, &a.classes).map_err(|e| Usage(e.to_string()))?;
    let classes = a
        .classes
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let mut rep = Report::new("schubert")
        .param("n", a.n)
        .param("classes", &classes);
    rep.result("product", product.to_string(), DERIVED);
    let top = 2 * (a.n - 1);
    if a.classes.iter().sum::<i64>() == top {
        let deg = special_product_integral(a.n, &a.classes).map_err(|e| Usage(e.to_string()))?;
        rep.result("degree", deg.to_string(), DERIVED);
    }
    Ok(emit(&rep, a.json))
}

fn cmd_abelian(a: AbelianArgs) -> Result<bool, Usage> {
    let mut rep = Report::new("abelian");
    let sigma = sigma_class();
    rep.result(
        "Σ in (F1, F2, Δ)",
        sigma.to_string(),
        "correspondence Σ on E×E",
    );
    rep.result(
        "Σ²",
        fmt_rat(&ee_intersect(&sigma, &sigma)),
        "correspondence Σ on E×E",
    );
    rep.result(
        "Σ²/2",
        fmt_rat(&ee_half_self_intersection(&sigma)),
        "correspondence Σ on E×E",
    );
    rep.result(
        "U·V",
        fmt_rat(&ee_intersect(&u_class(), &v_class())),
        "curves U, V on E×E",
    );
    let enu3 = enu3_count();
    rep.result(
        "enu3 pullback degree",
        enu3.pullback_degree.to_string(),
        DERIVED,
    );
    rep.result(
        "enu3 count",
        enu3.count.to_string(),
        "genus-3 enumerative count",
    );
    let psi = d3_psi_via_degeneration();
    rep.result("n0", psi.n0.to_string(), "class of D3");
    rep.result("(D3)_ψ", psi.psi_coefficient.to_string(), "class of D3");
    if let (Some(g), Some(b), Some(c)) = (a.g, a.b, a.c) {
        if !(1..=8).contains(&g) || b < 0 || c < 0 {
            return Err(Usage(
                "theta pullback needs 1 <= g <= 8 and b, c >= 0".into(),
            ));
        }
        rep = rep.param("g", g).param("b", b).param("c", c);
        rep.result(
            "theta pullback degree",
            theta_pullback_degree(g, b, c).to_string(),
            DERIVED,
        );
    }
    rep.checks = suites::abelian();
    Ok(emit(&rep, a.json))
}

fn cmd_oracle(a: OracleArgs) -> Result<bool, Usage> {
    if a.p_max < 7 || a.samples == 0 {
        return Err(Usage("oracle needs --p-max >= 7 and --samples >= 1".into()));
    }
    let mut rep = Report::new("oracle")
        .param("p_max", a.p_max)
        .param("samples", a.samples);
    for n in [2u64, 3, 4] {
        if let Some((c, s)) = full_torsion_curves(n, a.p_max)
            .ok()
            .and_then(|mut it| it.next())
        {
            rep.result(
                format!("first curve with full {n}-torsion"),
                format!(
                    "y² = x³ + {}x + {} over F_{}, group {:?}",
                    c.a(),
                    c.b(),
                    c.p(),
                    s.invariants
                ),
                DERIVED,
            );
        }
    }
    rep.checks = suites::oracle(a.p_max, a.samples);
    Ok(emit(&rep, a.json))
}

fn cmd_ratmaps(json: bool) -> Result<bool, Usage> {
    let mut rep = Report::new("ratmaps");
    let r = ratmaps_report().map_err(|e| Usage(e.to_string()))?;
    let anchor = "degree-4 cover with three triple points";
    rep.result("f", r.triple_cover.to_string(), anchor);
    rep.result("N'D - ND'", r.derivative_numerator.to_string(), anchor);
    rep.result("ramification", r.ramification.to_string(), anchor);
    rep.result(
        "f(t)·f(1/t)",
        r.inversion_constant
            .map_or("none".into(), |c| c.to_string()),
        "order-2 symmetry of the cover",
    );
    let relation = r
        .tail
        .relation
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>();
    rep.result(
        "tail relation (low to high)",
        relation,
        "tail cover t^4/(t - r')",
    );
    rep.result(
        "r'",
        r.tail
            .roots
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>(),
        "tail cover t^4/(t - r')",
    );
    rep.checks = suites::ratmaps();
    Ok(emit(&rep, json))
}

fn class_json(c: &M21Class) -> Value {
    let s = |x: &BigRat| fmt_rat(x);
    json!({"psi": s(&c.psi), "lambda": s(&c.lambda), "delta0": s(&c.delta0), "delta1": s(&c.delta1)})
}

fn cmd_pic(a: PicArgs) -> Result<bool, Usage> {
    let mut rep = Report::new("pic");
    for (name, c) in named_classes() {
        rep.result(name, class_json(&c), "named class on M_{2,1}");
    }
    rep.result("Diaz (genus 4)", diaz_class().to_string(), "Diaz divisor");
    let d1 = reconstruct_d1();
    rep.result("χ*Diaz", class_json(&d1.diaz_pullback), DERIVED);
    rep.result("χ*Diaz - 16W", class_json(&d1.unreduced), DERIVED);
    rep.result("D1 reconstructed", class_json(&d1.reduced), "class of D1");
    if let Some(d) = a.d {
        if !(3..=MAX_D).contains(&d) {
            return Err(Usage(format!("pic --d needs 3 <= d <= {MAX_D}")));
        }
        rep = rep.param("d", d);
        let coeffs = genus2_coefficients(d)
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>();
        rep.result(
            "coefficients of W, D1, D2, D3",
            coeffs,
            "genus-2 decomposition of the pullback",
        );
        let rhs = genus2_rhs(d);
        rep.result(
            "genus2_rhs",
            class_json(&rhs),
            "genus-2 decomposition of the pullback",
        );
        let lhs = solve_tr_class(d)
            .map_err(|e| Usage(e.to_string()))?
            .pullback();
        rep.checks.push(Check::eq(
            format!("χ*TR_{d} = genus2_rhs"),
            lhs.to_string(),
            rhs.to_string(),
            DERIVED,
        ));
    }
    rep.checks.push(Check::eq(
        "D1 reconstruction",
        d1.reduced.to_string(),
        named_classes()[1].1.to_string(),
        "class of D1",
    ));
    Ok(emit(&rep, a.json))
}
