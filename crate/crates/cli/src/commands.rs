use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use colift_core::cohomology::{
    check_condition, nonfree_pullback_report, punctured_plane_report, quotient_report, CohomologyError, Condition,
    SystemSpec, Verdict,
};
use colift_core::colfin::{matrix_from_json, ColFinError, Dense, MatrixJson};
use colift_core::lifting::{gl_lift, verify_certificate, CertificateJson, LiftError};
use colift_core::ring::{builtin_registry, HomRegistry, Ring, RingDescriptor};
use colift_core::skolem::{
    central_scalar, recover_conjugator, validate_auto_spec, AlgebraAutoSpec, AutoSpecJson, SkolemError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::{CohomologyArgs, DemoArgs, DemoPart, Format, LiftArgs, ReportKind, SkolemCommand, VerifyArgs};

pub const EXIT_PARSE: u8 = 2;
pub const EXIT_UNSUPPORTED: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn fail(code: u8, message: impl Display) -> Failure {
    Failure { code, message: message.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(1, format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

/// Writes one line to stdout; a closed pipe ends the process quietly.
pub(crate) fn say_line(text: std::fmt::Arguments<'_>) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: stdout: {e}");
        std::process::exit(1);
    }
}

macro_rules! say {
    ($($arg:tt)*) => { say_line(format_args!($($arg)*)) };
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn emit<T: Serialize + Display>(format: Format, v: &T) {
    match format {
        Format::Text => say!("{v}"),
        Format::Json => say!("{}", pretty(v)),
    }
}

fn registry(extra: Option<&Path>) -> Result<HomRegistry, Failure> {
    let mut reg = builtin_registry();
    if let Some(p) = extra {
        reg.extend_from_json(&read(p)?).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", p.display())))?;
    }
    Ok(reg)
}

fn lift_failure(e: LiftError) -> Failure {
    match e {
        LiftError::VerificationFailed(_) => fail(EXIT_VERIFY, e),
        LiftError::Ring(_) | LiftError::Certificate(_) => fail(EXIT_PARSE, e),
        _ => fail(EXIT_UNSUPPORTED, e),
    }
}

fn colfin_failure(e: ColFinError) -> Failure {
    match e {
        ColFinError::NotInvertible { .. } => fail(EXIT_UNSUPPORTED, e),
        _ => fail(EXIT_PARSE, e),
    }
}

pub fn lift(a: &LiftArgs, format: Format) -> Result<(), Failure> {
    let reg = registry(a.registry.as_deref())?;
    let hom = reg.get(&a.hom).ok_or_else(|| fail(EXIT_PARSE, format!("unknown hom `{}`", a.hom)))?;
    let spec: MatrixJson = parse_json(&a.matrix)?;
    let m = matrix_from_json(&spec, hom.target()).map_err(|e| fail(EXIT_PARSE, e))?;
    let p = m.invert().map_err(colfin_failure)?;
    let cert = gl_lift(hom, &p, a.window).map_err(lift_failure)?.to_json();
    write(&a.out, &pretty(&cert))?;
    let report = verify_certificate(&cert, &reg, a.window);
    emit(format, &report);
    if format == Format::Text {
        say!("certificate: {} ({} factors)", a.out.display(), cert.body.word_length);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(fail(EXIT_VERIFY, "certificate did not verify"))
    }
}

pub fn verify(a: &VerifyArgs, format: Format) -> Result<(), Failure> {
    let reg = registry(a.registry.as_deref())?;
    let cert: CertificateJson = parse_json(&a.cert)?;
    let window = a.window.unwrap_or(cert.body.verified_window.max(8));
    let report = verify_certificate(&cert, &reg, window);
    emit(format, &report);
    if report.passed() {
        Ok(())
    } else {
        Err(fail(EXIT_VERIFY, "verification failed"))
    }
}

fn skolem_failure(e: SkolemError) -> Failure {
    match e {
        SkolemError::Ring(_) => fail(EXIT_PARSE, e),
        SkolemError::UnsupportedRing(_) | SkolemError::NotFreeRankOne { .. } => fail(EXIT_UNSUPPORTED, e),
        _ => fail(EXIT_VERIFY, e),
    }
}

fn load_spec(path: &Path) -> Result<AlgebraAutoSpec, Failure> {
    let j: AutoSpecJson = parse_json(path)?;
    j.to_spec().map_err(|e| match e {
        SkolemError::InvalidSpec(_) | SkolemError::Ring(_) => fail(EXIT_PARSE, e),
        other => skolem_failure(other),
    })
}

pub fn skolem(c: &SkolemCommand, format: Format) -> Result<(), Failure> {
    match c {
        SkolemCommand::Validate { spec } => {
            let spec = load_spec(spec)?;
            let report = validate_auto_spec(&spec);
            emit(format, &report);
            if report.passed() {
                Ok(())
            } else {
                Err(fail(EXIT_VERIFY, "not an algebra automorphism"))
            }
        }
        SkolemCommand::Recover { spec, out } => {
            let spec = load_spec(spec)?;
            let report = validate_auto_spec(&spec);
            let conj = recover_conjugator(&spec).map_err(skolem_failure)?;
            let doc = json!({
                "n": spec.n(),
                "conjugator": conj.u.render(),
                "inverse": conj.inverse.render(),
                "validation": report,
                "conjugation_check": "passed",
                "scalar_ambiguity": "unique up to multiplication by a central unit",
            });
            if let Some(p) = out {
                write(p, &pretty(&doc))?;
            }
            match format {
                Format::Json => say!("{}", pretty(&doc)),
                Format::Text => {
                    say!("validation:\n{report}");
                    say!("conjugator U (U E_ij U^-1 = phi(E_ij) for all i, j):");
                    for row in conj.u.render() {
                        say!("  [{}]", row.join(", "));
                    }
                    say!("U is unique up to a central unit");
                }
            }
            Ok(())
        }
    }
}

fn cohomology_failure(e: CohomologyError) -> Failure {
    match e {
        CohomologyError::UnsupportedTwist(..) => fail(EXIT_UNSUPPORTED, e),
        _ => fail(EXIT_PARSE, e),
    }
}

pub fn cohomology(a: &CohomologyArgs, format: Format) -> Result<(), Failure> {
    fn out<T: Serialize + Display>(a: &CohomologyArgs, format: Format, r: &T) -> Result<(), Failure> {
        emit(format, r);
        if let Some(p) = &a.out {
            write(p, &pretty(r))?;
        }
        Ok(())
    }
    match a.report {
        Some(ReportKind::Punctured) => {
            out(a, format, &punctured_plane_report(a.degree_window, a.horizon).map_err(cohomology_failure)?)
        }
        Some(ReportKind::Quotient) => out(a, format, &quotient_report(a.horizon).map_err(cohomology_failure)?),
        Some(ReportKind::Nonfree) => {
            out(a, format, &nonfree_pullback_report(a.stages, a.degree).map_err(cohomology_failure)?)
        }
        None => {
            let system: SystemSpec =
                a.system.as_deref().unwrap_or_default().parse().map_err(cohomology_failure)?;
            let cond: Condition = a.cond.as_deref().unwrap_or_default().parse().map_err(cohomology_failure)?;
            let report = check_condition(&system, cond, &a.twist, a.horizon).map_err(cohomology_failure)?;
            out(a, format, &report)
        }
    }
}

#[derive(Serialize)]
struct DemoLine {
    part: &'static str,
    name: String,
    passed: bool,
    detail: String,
}

impl Display for DemoLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {:<10} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.part, self.name, self.detail)
    }
}

fn line(part: &'static str, name: &str, r: Result<String, String>) -> DemoLine {
    let (passed, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    DemoLine { part, name: name.into(), passed, detail }
}

fn demo_lift(reg: &HomRegistry, window: usize) -> Vec<DemoLine> {
    let run = |hom: &str, spec: &str| -> Result<String, String> {
        let h = reg.get(hom).ok_or_else(|| format!("hom `{hom}` is not registered"))?;
        let j: MatrixJson = serde_json::from_str(spec).map_err(|e| e.to_string())?;
        let m = matrix_from_json(&j, h.target()).map_err(|e| e.to_string())?;
        let p = m.invert().map_err(|e| e.to_string())?;
        let cert = gl_lift(h, &p, window).map_err(|e| e.to_string())?.to_json();
        let report = verify_certificate(&cert, reg, window);
        if report.passed() {
            Ok(format!("{} factors, verified on the {window}x{window} window", cert.body.word_length))
        } else {
            Err(report.to_string())
        }
    };
    vec![
        line(
            "lift",
            "u*Id along zxy_to_laurent",
            run("zxy_to_laurent", r#"{"form":"scalar_diagonal","prefix":[],"tail":"u"}"#),
        ),
        line(
            "lift",
            "diag(2,3) along z_to_z5",
            run("z_to_z5", r#"{"form":"finite_perturbation","corner":[["2","0"],["0","3"]]}"#),
        ),
    ]
}

fn random_invertible(rng: &mut ChaCha8Rng, ring: &Ring, n: usize, p: i64) -> Dense {
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
        let m = Dense::from_ints(ring, &rows);
        if m.det().is_unit() {
            return m;
        }
    }
}

fn demo_skolem() -> Vec<DemoLine> {
    let ring: Ring = Arc::new(RingDescriptor::residue(101).expect("valid modulus"));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let trials = 20;
    let mut failures = Vec::new();
    for t in 0..trials {
        let n = 2 + t % 5;
        let u_true = random_invertible(&mut rng, &ring, n, 101);
        let ok = AlgebraAutoSpec::from_conjugator(&u_true)
            .and_then(|spec| recover_conjugator(&spec))
            .map(|c| u_true.inverse().map(|inv| central_scalar(&c.u.mul(&inv)).is_some()).unwrap_or(false));
        match ok {
            Ok(true) => {}
            Ok(false) => failures.push(format!("trial {t}: U U_true^-1 is not scalar")),
            Err(e) => failures.push(format!("trial {t}: {e}")),
        }
    }
    vec![line(
        "skolem",
        "round trip over Z/101",
        if failures.is_empty() {
            Ok(format!("{trials} random conjugators recovered up to a central unit"))
        } else {
            Err(failures.join("; "))
        },
    )]
}

fn demo_cohomology() -> Vec<DemoLine> {
    let mut out = Vec::new();
    let std_p2 = check_condition(&SystemSpec::standard(2), Condition::V(0), &[-5], 12);
    out.push(line(
        "cohomology",
        "standard P2, V0, twist -5",
        match std_p2 {
            Ok(r) if r.twists[0].verdict == (Verdict::Threshold { level: 3 }) => Ok("n' = 3".into()),
            Ok(r) => Err(format!("got {}", r.twists[0].verdict)),
            Err(e) => Err(e.to_string()),
        },
    ));
    let shifted = SystemSpec::shifted_sum(1);
    let g = check_condition(&shifted, Condition::G, &[0], 12);
    let gp = check_condition(&shifted, Condition::GPrime, &[0], 12);
    out.push(line(
        "cohomology",
        "shifted sum on P1: G fails, G' holds",
        match (g, gp) {
            (Ok(g), Ok(gp)) if g.twists[0].verdict == Verdict::Never && gp.twists[0].verdict.holds() => {
                Ok(format!("G: {}, G': {}", g.twists[0].verdict, gp.twists[0].verdict))
            }
            (Ok(g), Ok(gp)) => Err(format!("G: {}, G': {}", g.twists[0].verdict, gp.twists[0].verdict)),
            (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
        },
    ));
    out.push(line(
        "cohomology",
        "punctured plane: V0 fails, V0' holds",
        match punctured_plane_report(6, 12) {
            Ok(r) if r.v0_fails && r.v0_prime_holds => {
                Ok(format!("{} classes, death bound {:?}", r.classes.len(), r.death_bound))
            }
            Ok(r) => Err(format!("V0 fails: {}, V0' holds: {}", r.v0_fails, r.v0_prime_holds)),
            Err(e) => Err(e.to_string()),
        },
    ));
    out.push(line(
        "cohomology",
        "quotient on P2: H^1(Q_n) != 0",
        match quotient_report(12) {
            Ok(r) => match r.certified_from {
                Some(k) if k <= 2 => Ok(format!("certified for {k} <= n <= 12")),
                other => Err(format!("certified from {other:?}")),
            },
            Err(e) => Err(e.to_string()),
        },
    ));
    out.push(line(
        "cohomology",
        "pullback to A^2 - {0} is not free",
        match nonfree_pullback_report(3, 4) {
            Ok(r) if r.identity_certified => Ok(r.conclusion),
            Ok(r) => Err(r.conclusion),
            Err(e) => Err(e.to_string()),
        },
    ));
    out
}

pub fn demo(a: &DemoArgs, format: Format) -> Result<(), Failure> {
    let reg = registry(a.registry.as_deref())?;
    let wants = |p: DemoPart| a.only.is_none_or(|o| o == p);
    let mut lines = Vec::new();
    if wants(DemoPart::Lift) {
        lines.extend(demo_lift(&reg, a.window));
    }
    if wants(DemoPart::Skolem) {
        lines.extend(demo_skolem());
    }
    if wants(DemoPart::Cohomology) {
        lines.extend(demo_cohomology());
    }
    match format {
        Format::Text => lines.iter().for_each(|l| say!("{l}")),
        Format::Json => say!("{}", pretty(&lines)),
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(fail(EXIT_VERIFY, format!("{failed} demo item(s) failed")))
    }
}
