/// `print!` that exits quietly when stdout is closed, e.g. piped into `head`.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

macro_rules! outln {
    () => { out!("\n") };
    ($($arg:tt)*) => {{ out!($($arg)*); out!("\n") }};
}

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ellsurf::catalog;
use ellsurf::construction::{self, ConstructionReport, JacobianInput};
use ellsurf::isotrivial::{self, IsotrivialReport};
use ellsurf::kodaira::{classify_all, SurfaceData, WeierstrassModel};
use ellsurf::lattice::{enumerate_overlattices, group_name, DiscGroup, IntegralLattice};
use ellsurf::modular;
use ellsurf::verify::{self, CaseOutcome, Ctx};
use ellsurf::Error;

use render::{pairs, paint, Style, Table};

const EXIT_DOMAIN: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "ellsurf", version, about = "Exact computations for elliptic surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct Output {
    /// Machine-readable JSON output, including errors.
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Aligned text tables (the default).
    #[arg(long)]
    table: bool,
}

#[derive(Args, Clone, Copy)]
struct JsonOnly {
    /// Machine-readable JSON output, including errors.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the singular fibres of a Weierstrass model.
    Classify {
        /// JSON model file or `catalog:NAME`.
        #[arg(long)]
        model: String,
        #[command(flatten)]
        out: Output,
    },
    /// Mordell-Weil torsion with its fibre component incidences.
    Torsion {
        #[arg(long)]
        model: String,
        #[command(flatten)]
        out: Output,
    },
    /// Discriminant group and overlattices of an integral lattice.
    Lattice {
        /// JSON file holding the Gram matrix as integer rows.
        #[arg(long)]
        gram: PathBuf,
        /// Enumerate integral overlattices
        #[arg(long)]
        overlattices: bool,
        /// Keep only even overlattices.
        #[arg(long, requires = "overlattices")]
        even: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Genera of modular curves and the derived torsion bounds.
    Modular {
        /// Table of g1(N) and t(N) over a range `A..B` (default 11..25).
        #[arg(long, value_name = "A..B", num_args = 0..=1, default_missing_value = "11..25")]
        table: Option<String>,
        /// Check t(N) <= 1/9 over `A..B`.
        #[arg(long, value_name = "A..B")]
        claim: Option<String>,
        /// Check g1(N) > N^2/(12 pi^2) - 2 over `A..B`.
        #[arg(long, value_name = "A..B")]
        lower: Option<String>,
        /// Torsion-order bound over a base of genus G.
        #[arg(long, value_name = "G")]
        bound: Option<i64>,
        /// Use the bound for isotrivial surfaces
        #[arg(long, requires = "bound")]
        isotrivial: bool,
        #[command(flatten)]
        out: JsonOnly,
    },
    /// Quotient of a base change by a torsion group.
    Construct {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Isotrivial fibrations (C x E)/G.
    Isotrivial {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// List the catalog, or show one surface.
    Catalog {
        name: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Run the regression cases.
    VerifyPaper {
        /// Glob over case ids, e.g. `c06-*`.
        #[arg(long)]
        cases: Option<String>,
        /// Seed for the randomized property suites.
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

struct Failure {
    error: Error,
    context: Value,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, context: json!({}) }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        error: Error::invalid(format!("cannot read {}: {e}", path.display())),
        context: json!({ "path": path.display().to_string() }),
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::invalid(format!("{what}: {e}")))
}

fn load_model(r: &str) -> Result<(Option<String>, WeierstrassModel), Failure> {
    if let Some(name) = r.strip_prefix("catalog:") {
        let e = catalog::entry(name)?;
        return Ok((Some(e.name), e.model));
    }
    let text = read(Path::new(r))?;
    Ok((None, parse_json(&text, "model")?))
}

fn load_jacobian(r: &str) -> Result<JacobianInput, Failure> {
    if r.starts_with("catalog:") {
        return Ok(catalog::load_ref(r)?);
    }
    let (_, w) = load_model(r)?;
    Ok(JacobianInput::from_model(&w)?)
}

fn print_json<T: Serialize>(x: &T) {
    outln!("{}", serde_json::to_string_pretty(x).expect("serializable"));
}

fn parse_range(s: &str) -> Result<(i64, i64), Error> {
    let bad = || Error::invalid(format!("expected a range A..B, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn ok() -> CmdResult {
    Ok(ExitCode::SUCCESS)
}

// ---- classify / torsion ----------------------------------------------------

fn surface_summary(s: &SurfaceData) -> String {
    pairs(&[
        ("e", s.euler.to_string()),
        ("chi", s.chi.to_string()),
        ("p_g", s.p_g.to_string()),
        ("q", s.q.to_string()),
        ("b2", s.b2.to_string()),
        ("h11", s.h11.to_string()),
        ("isotrivial", s.isotrivial.to_string()),
    ])
}

fn classify(model: &str, out: Output) -> CmdResult {
    let (name, w) = load_model(model)?;
    let s = classify_all(&w)?;
    if out.json {
        print_json(&json!({ "name": name, "surface": s, "geometric_fibers": s.geometric_fibers() }));
        return ok();
    }
    let mut t = Table::new(&["place", "type", "e", "components", "component group"]);
    for f in &s.fibers {
        let d = f.count();
        let place = if d > 1 { format!("{} ({d} points)", f.place.label()) } else { f.place.label() };
        let group: Vec<u64> = f.kind.component_group().into_iter().map(u64::from).collect();
        t.row(vec![
            place,
            f.kind.to_string(),
            (f.kind.euler() as usize * d).to_string(),
            f.kind.components().to_string(),
            group_name(&group),
        ]);
    }
    if let Some(n) = name {
        outln!("{}", paint(&n, Style::Bold));
    }
    out!("{}\n{}", t.render(), surface_summary(&s));
    ok()
}

fn torsion(model: &str, out: Output) -> CmdResult {
    let j = load_jacobian(model)?;
    let t = &j.torsion;
    if out.json {
        print_json(&json!({ "group": t.name(), "order": t.order(), "extremal": j.extremal, "torsion": t }));
        return ok();
    }
    let mut header = vec!["fibre".to_string(), "type".to_string()];
    header.extend((0..t.generators.len()).map(|i| format!("P{}", i + 1)));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new(&header);
    for (i, s) in t.slots.iter().enumerate() {
        let mut row = vec![s.label.clone(), s.kind.to_string()];
        row.extend(t.generators.iter().map(|g| g[i].to_string()));
        table.row(row);
    }
    outln!("torsion  {}  (order {})", paint(&t.name(), Style::Bold), t.order());
    outln!("extremal {}\n", j.extremal);
    out!("{}", table.render());
    ok()
}

// ---- lattice ---------------------------------------------------------------

fn lattice(gram: &Path, overlattices: bool, even: bool, out: Output) -> CmdResult {
    let rows: Vec<Vec<i64>> = parse_json(&read(gram)?, "Gram matrix")?;
    let l = IntegralLattice::new(rows)?;
    let dg = DiscGroup::new(&l)?;
    let ovs = if overlattices { Some(enumerate_overlattices(&l, even)?) } else { None };
    if out.json {
        print_json(&json!({
            "rank": l.rank(),
            "det": l.det().to_string(),
            "even": l.is_even(),
            "disc_orders": dg.orders,
            "overlattices": ovs,
        }));
        return ok();
    }
    out!(
        "{}",
        pairs(&[
            ("rank", l.rank().to_string()),
            ("det", l.det().to_string()),
            ("even", l.is_even().to_string()),
            ("disc group", group_name(&dg.orders)),
        ])
    );
    if let Some(ovs) = ovs {
        outln!();
        let mut t = Table::new(&["index", "det", "even", "unimodular", "generators"]);
        for o in &ovs {
            t.row(vec![
                o.index.to_string(),
                o.det.to_string(),
                o.even.to_string(),
                o.unimodular.to_string(),
                format!("{:?}", o.generators),
            ]);
        }
        out!("{}", t.render());
        outln!("{} overlattice(s)", ovs.len());
    }
    ok()
}

// ---- modular ---------------------------------------------------------------

fn modular_cmd(
    table: Option<String>,
    claim: Option<String>,
    lower: Option<String>,
    bound: Option<i64>,
    isotrivial: bool,
    out: JsonOnly,
) -> CmdResult {
    let table = match (&table, &claim, &lower, bound) {
        (None, None, None, None) => Some("11..25".to_string()),
        _ => table,
    };
    let mut doc = serde_json::Map::new();
    let mut text = String::new();
    if let Some(r) = table {
        let (a, b) = parse_range(&r)?;
        let mut t = Table::new(&["N", "g1(N)", "t(N)"]);
        let mut rows = Vec::new();
        for n in a..=b {
            let g1 = modular::genus_g1(n)?;
            let tn = modular::t_func(n)?.to_string();
            t.row(vec![n.to_string(), g1.to_string(), tn.clone()]);
            rows.push(json!({ "N": n, "g1": g1, "t": tn }));
        }
        doc.insert("table".into(), json!(rows));
        text.push_str(&t.render());
    }
    if let Some(r) = claim {
        let (a, b) = parse_range(&r)?;
        let c = modular::check_claim_range(a, b)?;
        text.push_str(&format!(
            "t(N) <= 1/9 for {a} <= N <= {b}: {} ({} checked, max t({}) = {})\n",
            if c.failures.is_empty() { "holds" } else { "FAILS" },
            c.checked,
            c.worst_n,
            c.worst_t
        ));
        doc.insert("claim".into(), json!(c));
    }
    if let Some(r) = lower {
        let (a, b) = parse_range(&r)?;
        let failures = modular::check_g1_lower_range(a, b)?;
        text.push_str(&format!(
            "g1(N) > N^2/(12 pi^2) - 2 for {a} <= N <= {b}: {}\n",
            if failures.is_empty() { "holds".to_string() } else { format!("fails at {failures:?}") }
        ));
        doc.insert("lower".into(), json!({ "from": a, "to": b, "failures": failures }));
    }
    if let Some(g) = bound {
        let tb = modular::mw_torsion_bound(g, isotrivial)?;
        text.push_str(&pairs(&[
            ("genus", g.to_string()),
            ("bound", tb.bound.to_string()),
            ("strict", tb.strict.to_string()),
            ("sharp", tb.sharp.map_or("-".into(), |s| s.to_string())),
        ]));
        doc.insert("bound".into(), json!(tb));
    }
    if out.json {
        print_json(&Value::Object(doc));
    } else {
        out!("{text}");
    }
    ok()
}

// ---- construct / isotrivial --------------------------------------------------

fn show_construction(r: &ConstructionReport) {
    if let Some(j) = &r.jacobian {
        outln!("{}", paint(j, Style::Bold));
    }
    out!(
        "{}",
        pairs(&[
            ("group", format!("{} (order {})", r.group, r.group_order)),
            ("cover", format!("degree {}, base genus {}, e = {}", r.cover.degree, r.cover.base_genus, r.cover.euler)),
            ("e", r.euler.to_string()),
            ("chi", r.chi.to_string()),
            ("q", r.q.to_string()),
            ("p_g", r.p_g.to_string()),
            ("P2", r.p2.map_or("-".into(), |p| p.to_string())),
            ("canonical degree", r.canonical_degree.clone()),
            ("kodaira dim", if r.enriques { "0 (Enriques)".into() } else { kod(r.kodaira_dim) }),
            ("Aut_Q", format!("{} {} (|Aut_Q|_B = {})", rel(r.autq.relation), r.autq.group, r.autq.base_order)),
        ])
    );
    outln!();
    let mut t = Table::new(&["point", "multiplicity", "type"]);
    for f in &r.fibers {
        t.row(vec![f.point.clone(), f.multiplicity.to_string(), f.kind.to_string()]);
    }
    out!("{}", t.render());
    outln!();
    let mut a = Table::new(&["audit", "result", "detail"]);
    for x in &r.audits {
        a.row(vec![x.rule.clone(), pass_label(x.pass), x.detail.clone()]);
    }
    out!("{}", a.render());
}

fn kod<T: Serialize>(k: T) -> String {
    serde_json::to_value(k).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn rel(r: construction::Relation) -> String {
    match r {
        construction::Relation::Equals => "equals".into(),
        construction::Relation::Contains => "contains".into(),
        construction::Relation::Trivial => "trivial".into(),
    }
}

fn pass_label(p: bool) -> String {
    if p {
        paint("PASS", Style::Green)
    } else {
        paint("FAIL", Style::Red)
    }
}

fn construct(input: &Path, out: Output) -> CmdResult {
    let text = read(input)?;
    let r = construction::run(&text).map_err(|e| Failure {
        error: e,
        context: json!({ "input": input.display().to_string() }),
    })?;
    if out.json {
        print_json(&r);
    } else {
        show_construction(&r);
    }
    ok()
}

fn show_isotrivial(r: &IsotrivialReport) {
    out!(
        "{}",
        pairs(&[
            ("r", format!("{} ({:?})", r.r, r.curve_kind)),
            ("|G|", format!("{} (|T| = {})", r.group_order, r.t_order)),
            ("g(C), g(D)", format!("{}, {}", r.genera.g_c, r.genera.g_d)),
            ("e", r.e.to_string()),
            ("chi", r.chi.to_string()),
            ("q", r.q.to_string()),
            ("p_g", r.p_g.to_string()),
            ("b2", r.b2.to_string()),
            ("P2", r.p2.map_or("-".into(), |p| p.to_string())),
            ("kodaira dim", kod(r.kodaira_dim)),
            ("center", r.center_order.to_string()),
            ("Aut_Z cap", format!("{} ({})", r.autz_bound.bound, r.autz_bound.rule)),
            ("Aut_Q cap", format!("{} ({})", r.autq_bound.bound, r.autq_bound.rule)),
        ])
    );
    outln!();
    let mut t = Table::new(&["point", "lambda", "c", "fibre", "e"]);
    for f in &r.fibers {
        t.row(vec![
            f.point.clone(),
            f.monodromy.lambda.to_string(),
            format!("({})", f.monodromy.c.join(", ")),
            f.fiber.clone(),
            f.euler.to_string(),
        ]);
    }
    out!("{}", t.render());
    outln!();
    let mut s = Table::new(&["point", "orbit", "type", "chain"]);
    for x in &r.singularities {
        s.row(vec![
            x.branch_point.clone(),
            x.orbit_size.to_string(),
            x.name.clone(),
            format!("{:?}", x.hj_chain),
        ]);
    }
    out!("{}", s.render());
    if let Some(c) = &r.center_check {
        outln!();
        out!(
            "{}",
            pairs(&[
                ("psi2", format!("lambda {}, c ({})", c.psi2.lambda, c.psi2.c.join(", "))),
                ("normalizes", c.normalizes.to_string()),
                ("centralizes", c.centralizes.to_string()),
                ("fixes singular points", c.fixes_singular_points.to_string()),
                ("verdict", c.verdict.clone()),
            ])
        );
    }
}

fn isotrivial_cmd(input: &Path, out: Output) -> CmdResult {
    let text = read(input)?;
    let r = isotrivial::run(&text).map_err(|e| Failure {
        error: e,
        context: json!({ "input": input.display().to_string() }),
    })?;
    if out.json {
        print_json(&r);
    } else {
        show_isotrivial(&r);
    }
    ok()
}

// ---- catalog ---------------------------------------------------------------

fn catalog_cmd(name: Option<String>, out: Output) -> CmdResult {
    let Some(name) = name else {
        let entries: Vec<_> = catalog::NAMES.iter().map(|n| catalog::entry(n)).collect::<Result<_, _>>()?;
        if out.json {
            print_json(&entries);
            return ok();
        }
        let mut t = Table::new(&["name", "equation", "fibres", "torsion"]);
        for e in &entries {
            let fibres: Vec<String> = e.fibers.iter().map(|(p, k)| format!("{k}@{p}")).collect();
            t.row(vec![e.name.clone(), e.note.clone(), fibres.join(" "), group_name(&e.torsion)]);
        }
        out!("{}", t.render());
        return ok();
    };
    let e = catalog::entry(&name)?;
    let j = catalog::load(&name)?;
    if out.json {
        print_json(&json!({ "entry": e, "jacobian": j }));
        return ok();
    }
    outln!("{}  {}", paint(&e.name, Style::Bold), e.note);
    let mut t = Table::new(&["place", "type"]);
    for f in &j.surface.fibers {
        t.row(vec![f.place.label(), f.kind.to_string()]);
    }
    out!("{}\n{}", t.render(), surface_summary(&j.surface));
    outln!("torsion     {}", j.torsion.name());
    outln!("extremal    {}", j.extremal);
    ok()
}

// ---- verify-paper ----------------------------------------------------------

fn verify_paper(cases: Option<String>, seed: u64, out: Output) -> CmdResult {
    let pattern = cases
        .as_deref()
        .map(glob::Pattern::new)
        .transpose()
        .map_err(|e| Error::invalid(format!("bad --cases glob: {e}")))?;
    // every stored equation must reproduce its stored fibres before anything runs
    for name in catalog::NAMES {
        catalog::load(name)?;
    }
    let outcomes: Vec<CaseOutcome> =
        verify::run_cases(|id| pattern.as_ref().is_none_or(|p| p.matches(id)), &Ctx { seed });
    if outcomes.is_empty() {
        return Err(Error::invalid("no case matches --cases").into());
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    if out.json {
        print_json(&json!({
            "seed": seed,
            "passed": outcomes.len() - failed,
            "failed": failed,
            "cases": outcomes,
        }));
    } else {
        let mut t = Table::new(&["result", "case", "ms", "source", "reference"]);
        for o in &outcomes {
            t.row(vec![
                pass_label(o.pass),
                o.id.clone(),
                format!("{:.1}", o.elapsed_ms),
                kod(o.provenance),
                o.citation.clone(),
            ]);
        }
        out!("{}", t.render());
        for o in outcomes.iter().filter(|o| !o.pass) {
            outln!("\n{} {}", paint("FAIL", Style::Red), o.id);
            outln!("  expected {}", o.expected);
            outln!("  actual   {}", o.actual);
            if let Some(e) = &o.error {
                outln!("  error    {e}");
            }
        }
        outln!("\n{} passed, {failed} failed (seed {seed})", outcomes.len() - failed);
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VERIFY) })
}

fn dispatch(cmd: Cmd) -> (bool, &'static str, CmdResult) {
    match cmd {
        Cmd::Classify { model, out } => (out.json, "classify", classify(&model, out)),
        Cmd::Torsion { model, out } => (out.json, "torsion", torsion(&model, out)),
        Cmd::Lattice { gram, overlattices, even, out } => {
            (out.json, "lattice", lattice(&gram, overlattices, even, out))
        }
        Cmd::Modular { table, claim, lower, bound, isotrivial, out } => {
            (out.json, "modular", modular_cmd(table, claim, lower, bound, isotrivial, out))
        }
        Cmd::Construct { input, out } => (out.json, "construct", construct(&input, out)),
        Cmd::Isotrivial { input, out } => (out.json, "isotrivial", isotrivial_cmd(&input, out)),
        Cmd::Catalog { name, out } => (out.json, "catalog", catalog_cmd(name, out)),
        Cmd::VerifyPaper { cases, seed, out } => (out.json, "verify-paper", verify_paper(cases, seed, out)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (json_out, command, result) = dispatch(cli.cmd);
    match result {
        Ok(code) => code,
        Err(Failure { error, mut context }) => {
            if let Value::Object(m) = &mut context {
                m.insert("command".into(), json!(command));
            }
            if json_out {
                print_json(&json!({
                    "error": { "code": error.code(), "detail": error.to_string(), "context": context }
                }));
            } else {
                eprintln!("{}: {error}", paint("error", Style::Red));
            }
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}
