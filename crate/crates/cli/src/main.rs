//! planeaut: classify plane polynomial automorphisms over Q and construct
//! the witnesses — factorization words, triangularizations,
//! diagonalizations, conjugators and degeneration families.
//!
//! Output is deterministic JSON (sorted keys, exact scalars as strings);
//! diagnostics go to standard error. Exit codes: 0 success, 2 usage or
//! parse error, 3 not an automorphism (classify), 4 transform obstruction
//! (NotSemisimple, NotTriangularizable, NotInS, ...), 1 failed check.

use planeaut_core::classify::{self, FixedLocus};
use planeaut_core::corpus::{self, CorpusProfile};
use planeaut_core::deformation;
use planeaut_core::endo::{format_endo, parse_endo, PlaneEndo};
use planeaut_core::error::Error;
use planeaut_core::membership::{self, SolverConfig};
use planeaut_core::normalform;
use planeaut_core::scalar::{rational_fraction_string, Scalar};
use planeaut_core::word::{self, Automorphism, Factor};
use serde_json::{json, Map, Value};
use std::io::Read;
use std::process::ExitCode;

const USAGE: &str = "usage: planeaut <command> [flags] [inputs]

commands:
  classify       full invariant report for each input map
  decompose      factor into affine and triangular factors
  invert         exact inverse
  triangularize  conjugate a locally finite map to triangular form
  diagonalize    conjugate a semisimple map to diagonal form
  conjugate      decide conjugacy of two semisimple maps; emit a conjugator
  degenerate     one-parameter family degenerating to a semisimple limit
  corpus         classify a deterministic random corpus and cross-check

flags:
  --json             emit JSON (the default; accepted for compatibility)
  --check            re-run internal cross-verifications; nonzero exit on failure
  --seed N           corpus seed (default 1)
  --count N          corpus size (default 10)
  --max-degree N     corpus triangular factor degree bound (default 3)
  --max-factors N    corpus word length bound (default 6)
  --max-height N     corpus coefficient height bound (default 3)

Inputs are endomorphisms like \"(2*X + Y^3, 3*Y)\", passed as arguments or
one per line on standard input. PLANEAUT_MAX_UNKNOWNS caps the membership
solver used by --check.";

struct Options {
    check: bool,
    seed: u64,
    count: usize,
    max_degree: u32,
    max_factors: usize,
    max_height: i64,
    inputs: Vec<String>,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    eprintln!("{USAGE}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(command) = args.first() else {
        return usage_error("missing command");
    };
    let mut opts = Options {
        check: false,
        seed: 1,
        count: 10,
        max_degree: 3,
        max_factors: 6,
        max_height: 3,
        inputs: Vec::new(),
    };
    let mut it = args[1..].iter();
    while let Some(arg) = it.next() {
        let (flag, inline) = match arg.split_once('=') {
            Some((f, v)) => (f, Some(v.to_string())),
            None => (arg.as_str(), None),
        };
        macro_rules! flag_value {
            () => {
                match inline.clone().or_else(|| it.next().cloned()) {
                    Some(v) => v,
                    None => return usage_error(&format!("{flag} needs a value")),
                }
            };
        }
        match flag {
            "--json" => {}
            "--check" => opts.check = true,
            "--seed" => match flag_value!().parse() {
                Ok(v) => opts.seed = v,
                Err(_) => return usage_error("--seed needs an integer"),
            },
            "--count" => match flag_value!().parse() {
                Ok(v) => opts.count = v,
                Err(_) => return usage_error("--count needs an integer"),
            },
            "--max-degree" => match flag_value!().parse() {
                Ok(v) if v >= 1 => opts.max_degree = v,
                _ => return usage_error("--max-degree needs a positive integer"),
            },
            "--max-factors" => match flag_value!().parse() {
                Ok(v) if v >= 1 => opts.max_factors = v,
                _ => return usage_error("--max-factors needs a positive integer"),
            },
            "--max-height" => match flag_value!().parse() {
                Ok(v) if v >= 1 => opts.max_height = v,
                _ => return usage_error("--max-height needs a positive integer"),
            },
            other if other.starts_with('-') => {
                return usage_error(&format!("unknown flag {other}"));
            }
            _ => opts.inputs.push(arg.clone()),
        }
    }

    match command.as_str() {
        "classify" => run_inputs(&mut opts, 1, cmd_classify),
        "decompose" => run_inputs(&mut opts, 1, cmd_decompose),
        "invert" => run_inputs(&mut opts, 1, cmd_invert),
        "triangularize" => run_inputs(&mut opts, 1, cmd_triangularize),
        "diagonalize" => run_inputs(&mut opts, 1, cmd_diagonalize),
        "conjugate" => run_inputs(&mut opts, 2, cmd_conjugate),
        "degenerate" => run_inputs(&mut opts, 1, cmd_degenerate),
        "corpus" => cmd_corpus(&opts),
        "--help" | "-h" | "help" => {
            println!("{USAGE}");
            ExitCode::SUCCESS
        }
        other => usage_error(&format!("unknown command {other}")),
    }
}

/// Gather inputs (arguments or stdin lines), group them by arity, and run
/// the handler; the first failure decides the exit code.
fn run_inputs(
    opts: &mut Options,
    arity: usize,
    handler: fn(&[PlaneEndo], &[String], &Options) -> Result<Value, CmdError>,
) -> ExitCode {
    if opts.inputs.is_empty() {
        let mut buf = String::new();
        if std::io::stdin().read_to_string(&mut buf).is_err() {
            return usage_error("cannot read standard input");
        }
        opts.inputs =
            buf.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect();
    }
    if opts.inputs.is_empty() || opts.inputs.len() % arity != 0 {
        return usage_error(&format!("expected inputs in groups of {arity}"));
    }
    for group in opts.inputs.chunks(arity) {
        let mut parsed = Vec::with_capacity(arity);
        for text in group {
            match parse_endo(text) {
                Ok(e) => parsed.push(e),
                Err(err) => {
                    eprintln!("error: {err} in {text:?}");
                    return ExitCode::from(2);
                }
            }
        }
        match handler(&parsed, group, opts) {
            Ok(doc) => println!("{}", serde_json::to_string(&doc).expect("serializable")),
            Err(CmdError { exit, error }) => {
                eprintln!("error: {error}");
                return ExitCode::from(exit);
            }
        }
    }
    ExitCode::SUCCESS
}

struct CmdError {
    exit: u8,
    error: Error,
}

fn classify_error(error: Error) -> CmdError {
    let exit = match &error {
        Error::NotAnAutomorphism(_) => 3,
        Error::Syntax { .. } | Error::UnknownVariable { .. } => 2,
        _ => 4,
    };
    CmdError { exit, error }
}

fn transform_error(error: Error) -> CmdError {
    let exit = match &error {
        Error::Syntax { .. } | Error::UnknownVariable { .. } => 2,
        _ => 4,
    };
    CmdError { exit, error }
}

// ---------------------------------------------------------------------------
// JSON encoding of core values
// ---------------------------------------------------------------------------

fn scalar_json(s: &Scalar) -> Value {
    match s {
        Scalar::Rat(r) => Value::String(rational_fraction_string(r)),
        Scalar::Quad(q) => json!([
            rational_fraction_string(&q.a),
            rational_fraction_string(&q.b),
            q.d.to_string()
                .parse::<i64>()
                .map(Value::from)
                .unwrap_or_else(|_| Value::String(q.d.to_string())),
        ]),
    }
}

/// Endomorphisms with rational coefficients serialize as grammar strings
/// (re-parsable); quadratic coefficients fall back to an explicit term
/// list tagged per coefficient.
fn endo_json(e: &PlaneEndo) -> Value {
    if e.is_rational() {
        Value::String(format_endo(e))
    } else {
        let comp = |p: &planeaut_core::BiPoly| -> Value {
            Value::Array(p.terms().map(|(&(i, j), c)| json!([i, j, scalar_json(c)])).collect())
        };
        json!({ "display": e.to_string(), "terms": [comp(&e.f1), comp(&e.f2)] })
    }
}

fn upoly_json(p: &planeaut_core::UniPoly) -> Value {
    json!({
        "display": p.to_string(),
        "coefficients": Value::Array(p.coeffs().iter().map(scalar_json).collect()),
    })
}

fn base_document(command: &str, inputs: &[String]) -> Map<String, Value> {
    let mut doc = Map::new();
    doc.insert("command".into(), command.into());
    doc.insert("tool".into(), "planeaut".into());
    doc.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    if inputs.len() == 1 {
        doc.insert("input".into(), inputs[0].clone().into());
    } else {
        doc.insert(
            "input".into(),
            Value::Array(inputs.iter().map(|s| s.clone().into()).collect()),
        );
    }
    doc
}

fn fixed_locus_json(locus: &FixedLocus) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), locus.kind().into());
    match locus {
        FixedLocus::SimplePoint(p) => {
            m.insert("point".into(), json!([scalar_json(&p.x), scalar_json(&p.y)]));
        }
        FixedLocus::Lines { count, curve } => {
            m.insert("count".into(), (*count).into());
            m.insert("curve".into(), curve.to_string().into());
        }
        FixedLocus::FiniteScheme { length } => {
            m.insert("length".into(), (*length).into());
        }
        FixedLocus::Empty | FixedLocus::Plane => {}
    }
    Value::Object(m)
}

fn report_json(doc: &mut Map<String, Value>, f: &PlaneEndo) -> Result<Automorphism, CmdError> {
    let aut = Automorphism::from_endo(f).map_err(classify_error)?;
    let report = classify::full_report_for(&aut).map_err(classify_error)?;
    doc.insert("canonical".into(), format_endo(f).into());
    doc.insert("degree".into(), report.degree.into());
    doc.insert("is_automorphism".into(), true.into());
    doc.insert("lf".into(), report.is_lf.into());
    doc.insert("triangularizable".into(), report.is_triangularizable.into());
    doc.insert("jacobian".into(), scalar_json(&aut.jacobian()));
    match &report.pseudo {
        Some(p) => {
            doc.insert(
                "pseudo_eigenvalues".into(),
                json!([scalar_json(&p.roots.0), scalar_json(&p.roots.1)]),
            );
            doc.insert("trace".into(), scalar_json(&p.trace));
        }
        None => {
            doc.insert("pseudo_eigenvalues".into(), Value::Null);
            doc.insert("trace".into(), Value::Null);
        }
    }
    match &report.minimal_polynomial {
        Some(mu) => doc.insert("minimal_polynomial".into(), upoly_json(mu)),
        None => doc.insert("minimal_polynomial".into(), Value::Null),
    };
    doc.insert("unipotent".into(), report.is_unipotent.into());
    doc.insert("semisimple".into(), report.is_semisimple.into());
    doc.insert("in_s".into(), report.in_s.into());
    doc.insert("fixed_locus".into(), fixed_locus_json(&report.fixed_locus));
    if let FixedLocus::FiniteScheme { length } = &report.fixed_locus {
        doc.insert("fixed_scheme_length".into(), (*length).into());
    }
    doc.insert(
        "dynamical_degree".into(),
        Value::String(rational_fraction_string(&report.dynamical_degree)),
    );
    doc.insert("closed".into(), report.conjugacy_class_closed.into());
    Ok(aut)
}

fn solver_config_from_env() -> SolverConfig {
    let mut config = SolverConfig::default();
    if let Ok(v) = std::env::var("PLANEAUT_MAX_UNKNOWNS") {
        if let Ok(n) = v.parse::<usize>() {
            config.max_unknowns = n;
        }
    }
    config
}

/// The --check cross-verifications: internal report consistency (minimal
/// polynomial annihilation, pseudo-eigenvalue root containment, trace
/// identities) plus membership certificates for the fixed point when the
/// map has a single one.
fn check_json(aut: &Automorphism) -> Result<Value, Vec<String>> {
    let report = classify::full_report_for(aut).map_err(|e| vec![e.to_string()])?;
    let mut failures = classify::consistency_failures(aut, &report);
    let mut checks = Map::new();
    checks.insert("report_consistent".into(), failures.is_empty().into());
    if report.in_s && aut.endo().is_rational() {
        match membership::express_fixed_point(aut, &solver_config_from_env()) {
            Ok((cx, cy)) => {
                let ok = cx.verify() && cy.verify();
                checks.insert("fixed_point_certificates".into(), ok.into());
                if !ok {
                    failures.push("fixed point certificates failed to verify".into());
                }
            }
            Err(e) => failures.push(format!("fixed point certificate failed: {e}")),
        }
    }
    if failures.is_empty() {
        Ok(Value::Object(checks))
    } else {
        Err(failures)
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_classify(endos: &[PlaneEndo], inputs: &[String], opts: &Options) -> Result<Value, CmdError> {
    let mut doc = base_document("classify", inputs);
    let aut = report_json(&mut doc, &endos[0])?;
    if opts.check {
        match check_json(&aut) {
            Ok(checks) => {
                doc.insert("checks".into(), checks);
            }
            Err(failures) => {
                for f in &failures {
                    eprintln!("check failed: {f}");
                }
                return Err(CmdError {
                    exit: 1,
                    error: Error::BadInput(format!("{} check(s) failed", failures.len())),
                });
            }
        }
    }
    Ok(Value::Object(doc))
}

fn cmd_decompose(
    endos: &[PlaneEndo],
    inputs: &[String],
    _opts: &Options,
) -> Result<Value, CmdError> {
    let word = word::jvdk_decompose(&endos[0]).map_err(transform_error)?;
    let mut doc = base_document("decompose", inputs);
    let factors: Vec<Value> = word
        .factors()
        .iter()
        .map(|f| match f {
            Factor::Affine(a) => json!({
                "type": "affine",
                "endo": endo_json(&a.to_endo()),
                "linear": [
                    [scalar_json(&a.linear.a), scalar_json(&a.linear.b)],
                    [scalar_json(&a.linear.c), scalar_json(&a.linear.d)],
                ],
                "translation": [scalar_json(&a.translation.0), scalar_json(&a.translation.1)],
            }),
            Factor::Triangular(t) => json!({
                "type": "triangular",
                "endo": endo_json(&t.to_endo()),
                "a": scalar_json(&t.a),
                "p": upoly_json(&t.p),
                "b": scalar_json(&t.b),
                "c": scalar_json(&t.c),
            }),
        })
        .collect();
    let verified = word.composite() == &endos[0];
    doc.insert("word".into(), Value::Array(factors));
    doc.insert("length".into(), word.len().into());
    doc.insert("degree".into(), word.degree().into());
    doc.insert("verified".into(), verified.into());
    assert!(verified, "decomposition must recompose exactly");
    Ok(Value::Object(doc))
}

fn cmd_invert(endos: &[PlaneEndo], inputs: &[String], _opts: &Options) -> Result<Value, CmdError> {
    let aut = Automorphism::from_endo(&endos[0]).map_err(transform_error)?;
    let inv = word::invert(&aut);
    let verified = aut.endo().compose(inv.endo()).is_identity()
        && inv.endo().compose(aut.endo()).is_identity();
    let mut doc = base_document("invert", inputs);
    doc.insert("inverse".into(), endo_json(inv.endo()));
    doc.insert("degree".into(), inv.degree().into());
    doc.insert("verified".into(), verified.into());
    assert!(verified);
    Ok(Value::Object(doc))
}

fn cmd_triangularize(
    endos: &[PlaneEndo],
    inputs: &[String],
    _opts: &Options,
) -> Result<Value, CmdError> {
    let aut = Automorphism::from_endo(&endos[0]).map_err(transform_error)?;
    let (phi, t) = classify::triangularize(&aut).map_err(transform_error)?;
    let recomposed = phi.endo().compose(&t.to_endo()).compose(phi.inverse().endo());
    let verified = &recomposed == aut.endo();
    let dp = phi.degree();
    let degree_identity = aut.degree() == t.degree() * dp * dp;
    let mut doc = base_document("triangularize", inputs);
    doc.insert("conjugator".into(), endo_json(phi.endo()));
    doc.insert("triangular".into(), endo_json(&t.to_endo()));
    doc.insert("degree_identity".into(), degree_identity.into());
    doc.insert("verified".into(), (verified && degree_identity).into());
    assert!(verified && degree_identity);
    Ok(Value::Object(doc))
}

fn cmd_diagonalize(
    endos: &[PlaneEndo],
    inputs: &[String],
    _opts: &Options,
) -> Result<Value, CmdError> {
    let aut = Automorphism::from_endo(&endos[0]).map_err(transform_error)?;
    let d = normalform::diagonalize(&aut).map_err(transform_error)?;
    let recomposed = d
        .conjugator
        .endo()
        .compose(&d.diagonal_endo())
        .compose(d.conjugator.inverse().endo());
    let verified = &recomposed == aut.endo() && d.conjugator.degree() <= aut.degree();
    let mut doc = base_document("diagonalize", inputs);
    doc.insert("a".into(), scalar_json(&d.a));
    doc.insert("b".into(), scalar_json(&d.b));
    doc.insert("diagonal".into(), endo_json(&d.diagonal_endo()));
    doc.insert("conjugator".into(), endo_json(d.conjugator.endo()));
    doc.insert("conjugator_degree".into(), d.conjugator.degree().into());
    doc.insert("verified".into(), verified.into());
    assert!(verified);
    Ok(Value::Object(doc))
}

fn cmd_conjugate(
    endos: &[PlaneEndo],
    inputs: &[String],
    _opts: &Options,
) -> Result<Value, CmdError> {
    let f = Automorphism::from_endo(&endos[0]).map_err(transform_error)?;
    let g = Automorphism::from_endo(&endos[1]).map_err(transform_error)?;
    let outcome = normalform::conjugacy_test_semisimple(&f, &g).map_err(transform_error)?;
    let mut doc = base_document("conjugate", inputs);
    match outcome {
        Some(psi) => {
            let back = psi.endo().compose(g.endo()).compose(psi.inverse().endo());
            let verified = &back == f.endo();
            doc.insert("conjugate".into(), true.into());
            doc.insert("conjugator".into(), endo_json(psi.endo()));
            doc.insert("verified".into(), verified.into());
            assert!(verified);
        }
        None => {
            doc.insert("conjugate".into(), false.into());
            doc.insert("conjugator".into(), Value::Null);
            doc.insert("verified".into(), true.into());
        }
    }
    Ok(Value::Object(doc))
}

fn cmd_degenerate(
    endos: &[PlaneEndo],
    inputs: &[String],
    _opts: &Options,
) -> Result<Value, CmdError> {
    let aut = Automorphism::from_endo(&endos[0]).map_err(transform_error)?;
    let w = deformation::closure_witness(&aut).map_err(transform_error)?;
    // exact re-verification before claiming anything
    let one = Scalar::one();
    let half = Scalar::ratio(1, 2);
    let specialization_ok = |t0: &Scalar| {
        let direct = w.scaling.at(t0).compose(&w.base).compose(&w.scaling.at_inverse(t0));
        w.family.specialize(t0) == direct
    };
    let back = w
        .base_conjugator
        .endo()
        .compose(&w.base)
        .compose(w.base_conjugator.inverse().endo());
    let verified = w.family.specialize(&one) == w.base
        && specialization_ok(&one)
        && specialization_ok(&half)
        && &back == aut.endo()
        && deformation::limit_at_zero(&w.family).map(|l| l == w.limit).unwrap_or(false);
    let mut doc = base_document("degenerate", inputs);
    doc.insert("family".into(), w.family.to_string().into());
    doc.insert("limit".into(), endo_json(&w.limit));
    doc.insert("base".into(), endo_json(&w.base));
    doc.insert("base_conjugator".into(), endo_json(w.base_conjugator.endo()));
    doc.insert(
        "scaling".into(),
        json!({"x_exponent": w.scaling.x_exp, "y_exponent": w.scaling.y_exp}),
    );
    doc.insert("limit_in_class".into(), w.limit_in_class.into());
    doc.insert("limit_semisimple".into(), true.into());
    doc.insert(
        "shared_invariants".into(),
        json!({
            "jacobian": scalar_json(&w.source_jac),
            "source_trace": w.source_trace.as_ref().map(scalar_json).unwrap_or(Value::Null),
            "limit_trace": scalar_json(&w.limit_trace),
        }),
    );
    doc.insert("verified".into(), verified.into());
    assert!(verified);
    Ok(Value::Object(doc))
}

fn cmd_corpus(opts: &Options) -> ExitCode {
    if opts.count == 0 {
        return usage_error("--count must be at least 1");
    }
    let profile = CorpusProfile {
        max_factors: opts.max_factors,
        max_tri_degree: opts.max_degree,
        max_height: opts.max_height,
    };
    let elements = corpus::generate(opts.seed, opts.count, &profile);
    let mut lf_agree = 0usize;
    let mut roundtrip = 0usize;
    let mut annihilation = 0usize;
    let mut lf_total = 0usize;
    let mut closed_iff_ss = 0usize;
    for (index, aut) in elements.iter().enumerate() {
        let probe = classify::LfProbe::new(aut);
        let lf_a = probe.is_lf();
        let (_, reduced) = word::cyclic_reduce(aut);
        let lf_b = reduced.len() <= 1;
        let lf_c = probe.iterates_bounded(4);
        if lf_a == lf_b && lf_b == lf_c {
            lf_agree += 1;
        }
        let word_again = match word::jvdk_decompose(aut.endo()) {
            Ok(w) => w.composite() == aut.endo(),
            Err(_) => false,
        };
        if word_again {
            roundtrip += 1;
        }
        let report = match classify::full_report_for(aut) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("corpus element {index} failed to classify: {e}");
                return ExitCode::from(1);
            }
        };
        if report.is_lf {
            lf_total += 1;
            if let Some(mu) = &report.minimal_polynomial {
                if probe.annihilates(mu) {
                    annihilation += 1;
                }
            }
        }
        if report.conjugacy_class_closed == report.is_semisimple {
            closed_iff_ss += 1;
        }
        let mut doc = base_document("corpus", &[format_endo(aut.endo())]);
        doc.insert("index".into(), index.into());
        if let Err(CmdError { error, .. }) = report_json(&mut doc, aut.endo()) {
            eprintln!("corpus element {index}: {error}");
            return ExitCode::from(1);
        }
        println!("{}", serde_json::to_string(&Value::Object(doc)).expect("serializable"));
    }
    let n = elements.len();
    let summary = json!({
        "command": "corpus-summary",
        "count": n,
        "seed": opts.seed,
        "lf_criteria_agree": format!("{lf_agree}/{n}"),
        "decompose_roundtrip": format!("{roundtrip}/{n}"),
        "mu_annihilates": format!("{annihilation}/{lf_total}"),
        "closed_iff_semisimple": format!("{closed_iff_ss}/{n}"),
    });
    println!("{}", serde_json::to_string(&summary).expect("serializable"));
    let ok = lf_agree == n && roundtrip == n && annihilation == lf_total && closed_iff_ss == n;
    if ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("corpus cross-checks failed");
        ExitCode::from(1)
    }
}
