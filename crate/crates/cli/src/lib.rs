//! Command implementations behind the `descent-loewy` binary. Every command
//! returns a [`RunReport`] and a short human-readable summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use descent_loewy::arrangement::{signed_partition, Arrangement, Geometry};
use descent_loewy::coxeter::{subset_label, CoxeterSystem, Family, SubsetJ, DEFAULT_GROUP_CAP};
use descent_loewy::descent::{
    descent_algebra, direct_descent_idempotents_report, loewy_report, verify_anti_isomorphism, Method,
};
use descent_loewy::exactalg::{verify_complete_system, CompleteSystemReport};
use descent_loewy::facealg::{
    idempotents_e, invariant_algebra, invariant_idempotents, invariant_idempotents_recursive,
    invariant_structure_constants, invariant_structure_constants_from_faces, FaceAlgebra, InvariantOrbitData,
    OrbitChoice, PRODUCT_TABLE_BOUND,
};
use descent_loewy::quiverphi::{
    build_q, certify_type_d, invariant_quiver, orbit_label, verify_phi, InvariantQuiver,
};
use descent_loewy::{Error, Rational};
use serde::Serialize;
use serde_json::{json, Value};

pub const ROOT_CONVENTION: &str = "simple-roots-e_i-e_i+1-v1";
pub const ORIENTATION_CONVENTION: &str = "rref-pivot-order-v1";

/// Group order above which a run needs `--long-running`.
pub const LONG_RUNNING_ORDER: u64 = 100_000;

/// Face counts above which the lattice cross-check of `quiver --invariant`
/// is skipped.
pub const LATTICE_CROSS_CHECK_FACES: usize = 300_000;

/// Face count up to which associativity is checked on every triple.
const FULL_TRIPLE_BOUND: usize = 256;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("resource cap: {0}")]
    Cap(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Cap(_) => 3,
            CliError::Io(_) => 74,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::RankOutOfRange { .. } | Error::NotTypeD(_) => CliError::Usage(e.to_string()),
            Error::GroupTooLarge { .. } | Error::TooManyHyperplanes(_) => CliError::Cap(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Debug, Serialize)]
pub struct SystemId {
    pub family: Family,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Conventions {
    pub root: &'static str,
    pub orientation: &'static str,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            root: ROOT_CONVENTION,
            orientation: ORIENTATION_CONVENTION,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub system: SystemId,
    pub conventions: Conventions,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl RunReport {
    /// The report without timing, as written to export files.
    pub fn stable(&self) -> RunReport {
        RunReport {
            wall_ms: None,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// A finished command: the report, a summary for the terminal and whether
/// every check passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub text: String,
    pub passed: bool,
    /// First failure, if any.
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub long_running: bool,
    pub cap: usize,
    pub method: Option<Method>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            long_running: false,
            cap: DEFAULT_GROUP_CAP,
            method: None,
        }
    }
}

impl Options {
    /// Reads the group cap from `DESCENT_LOEWY_CAP` when set.
    pub fn cap_from_env() -> CliResult<usize> {
        match std::env::var("DESCENT_LOEWY_CAP") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("DESCENT_LOEWY_CAP must be a positive integer, got `{v}`"))),
            Err(_) => Ok(DEFAULT_GROUP_CAP),
        }
    }
}

fn system(family: Family, rank: usize, opts: &Options) -> CliResult<CoxeterSystem> {
    let sys = CoxeterSystem::with_cap(family, rank, opts.cap)?;
    if sys.order() > opts.cap as u64 {
        return Err(CliError::Cap(format!(
            "group of type {family}{rank} has {} elements, above the materialization cap of {}",
            sys.order(),
            opts.cap
        )));
    }
    if sys.order() > LONG_RUNNING_ORDER && !opts.long_running {
        return Err(CliError::Usage(format!(
            "{family}{rank} has {} elements; rerun with --long-running",
            sys.order()
        )));
    }
    Ok(sys)
}

/// Number of faces: `Σ_J |W| / |W_J|`.
pub fn face_count(sys: &CoxeterSystem) -> CliResult<u64> {
    let mut total = 0u64;
    for j in 0..(1u32 << sys.rank()) {
        total += sys.order() / sys.parabolic_order(j)? as u64;
    }
    Ok(total)
}

fn require_face_algebra(sys: &CoxeterSystem) -> CliResult<()> {
    let n = face_count(sys)?;
    if n > PRODUCT_TABLE_BOUND as u64 {
        return Err(CliError::Cap(format!(
            "{} has {n} faces; the face semigroup algebra is materialized only up to {PRODUCT_TABLE_BOUND}",
            sys.name()
        )));
    }
    Ok(())
}

fn geometry(sys: &CoxeterSystem) -> CliResult<Geometry> {
    Ok(Geometry::from_system(CoxeterSystem::with_cap(sys.family(), sys.rank(), sys.cap())?)?)
}

fn report(command: &str, sys: &CoxeterSystem, payload: Value, start: Instant) -> RunReport {
    RunReport {
        command: command.to_string(),
        system: SystemId {
            family: sys.family(),
            rank: sys.rank(),
        },
        conventions: Conventions::default(),
        payload,
        wall_ms: Some(start.elapsed().as_millis() as u64),
    }
}

fn internal<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Internal(e.to_string())
}

/// Loewy length of `Σ(W)` and its radical filtration.
pub fn cmd_loewy(family: Family, rank: usize, opts: &Options) -> CliResult<Outcome> {
    let start = Instant::now();
    let sys = system(family, rank, opts)?;
    let method = opts.method.unwrap_or(Method::Pullback);
    let r = loewy_report::<Rational>(&sys, method)?;
    let text = format!(
        "{}: Loewy length {} (dim {}, dim rad^i = {:?}, method {})\n",
        sys.name(),
        r.loewy_length,
        r.dimension,
        r.radical_dims,
        r.method
    );
    let payload = json!({
        "schema": "loewy/1",
        "loewy_length": r.loewy_length,
        "dimension": r.dimension,
        "radical_dims": r.radical_dims,
        "method": r.method,
    });
    Ok(Outcome {
        report: report("loewy", &sys, payload, start),
        text,
        passed: true,
        first_failure: None,
    })
}

/// The verification suites accepted by [`cmd_verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Semigroup,
    Idempotents,
    AntiIso,
    Phi,
    Lemmas,
    All,
}

impl std::str::FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s {
            "semigroup" => Suite::Semigroup,
            "idempotents" => Suite::Idempotents,
            "antiiso" => Suite::AntiIso,
            "phi" => Suite::Phi,
            "lemmas" => Suite::Lemmas,
            "all" => Suite::All,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown suite `{other}` (expected semigroup, idempotents, antiiso, phi, lemmas or all)"
                )))
            }
        })
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Semigroup => "semigroup",
            Suite::Idempotents => "idempotents",
            Suite::AntiIso => "antiiso",
            Suite::Phi => "phi",
            Suite::Lemmas => "lemmas",
            Suite::All => "all",
        }
    }
}

/// One named check inside a suite.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn complete_check(name: &str, r: &CompleteSystemReport) -> Check {
    let detail = if r.passed() {
        format!("{} idempotents, dim A/rad A = {}", r.count, r.semisimple_rank)
    } else {
        r.failures.join("; ")
    };
    Check::new(name, r.passed(), detail)
}

fn suite_semigroup(sys: &CoxeterSystem) -> CliResult<Vec<Check>> {
    require_face_algebra(sys)?;
    let g = geometry(sys)?;
    let faces = &g.faces;
    let n = faces.len();
    let mut checks = Vec::new();

    let mut band = None;
    'outer: for x in 0..n {
        if faces.product(x, x)? != x {
            band = Some(format!("x x != x for face {x}"));
            break;
        }
        for y in 0..n {
            let xy = faces.product(x, y)?;
            if faces.product(xy, x)? != xy {
                band = Some(format!("x y x != x y for faces {x}, {y}"));
                break 'outer;
            }
        }
    }
    checks.push(Check::new(
        "left regular band",
        band.is_none(),
        band.unwrap_or_else(|| format!("x^2 = x and xyx = xy on {n} faces")),
    ));

    let mut assoc = None;
    let triples: Box<dyn Iterator<Item = (usize, usize, usize)>> = if n <= FULL_TRIPLE_BOUND {
        Box::new((0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z)))))
    } else {
        // a fixed stride walk over triples keeps the run deterministic
        Box::new((0..200_000usize).map(move |t| (t % n, (t * 7919) % n, (t * 104_729) % n)))
    };
    for (x, y, z) in triples {
        if faces.product(faces.product(x, y)?, z)? != faces.product(x, faces.product(y, z)?)? {
            assoc = Some(format!("associativity fails on faces {x}, {y}, {z}"));
            break;
        }
    }
    checks.push(Check::new(
        "associativity",
        assoc.is_none(),
        assoc.unwrap_or_else(|| {
            if n <= FULL_TRIPLE_BOUND {
                "all triples".to_string()
            } else {
                "200000 strided triples".to_string()
            }
        }),
    ));

    let mut equivariant = None;
    'eq: for k in 0..faces.generator_count() {
        for x in 0..n {
            for y in 0..n {
                let lhs = faces.act_generator(k, faces.product(x, y)?);
                let rhs = faces.product(faces.act_generator(k, x), faces.act_generator(k, y))?;
                if lhs != rhs {
                    equivariant = Some(format!("s{} does not respect the product of {x}, {y}", k + 1));
                    break 'eq;
                }
            }
        }
    }
    checks.push(Check::new(
        "generators act by automorphisms",
        equivariant.is_none(),
        equivariant.unwrap_or_else(|| "all face pairs".into()),
    ));

    let by_points = invariant_structure_constants(sys)?;
    let by_faces = invariant_structure_constants_from_faces(faces)?;
    checks.push(Check::new(
        "invariant structure constants: sample points vs face products",
        by_points == by_faces,
        format!("{} x {} basis pairs", by_points.len(), by_points.len()),
    ));
    Ok(checks)
}

fn suite_idempotents(sys: &CoxeterSystem, opts: &Options) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let inv = invariant_algebra::<Rational>(sys)?;
    let arr = Arrangement::new(sys);
    let data = InvariantOrbitData::canonical(sys, &arr)?;
    let eps = invariant_idempotents_recursive(&inv, &data);
    checks.push(complete_check("orbit idempotents in the invariant algebra", &verify_complete_system(&inv, &eps)));

    let method = opts.method.unwrap_or(Method::Pullback);
    let desc = descent_algebra::<Rational>(sys, method)?;
    checks.push(complete_check(
        "direct idempotents in the descent algebra",
        &direct_descent_idempotents_report(sys, &desc)?,
    ));

    if face_count(sys)? <= PRODUCT_TABLE_BOUND as u64 {
        let g = geometry(sys)?;
        let alg = FaceAlgebra::new(&g.faces)?;
        let choice = OrbitChoice::canonical(&g.faces, &g.lattice);
        let e = idempotents_e::<Rational>(&alg, &g.lattice, &choice)?;
        checks.push(complete_check(
            "face idempotents e_X",
            &alg.verify_complete_system(&e, g.lattice.len()),
        ));
        let sums = invariant_idempotents(&e, &g.lattice);
        let mut agree = true;
        for (c, &j) in data.types.iter().enumerate() {
            let o = g.lattice.orbit_of_type(&g.faces, j);
            let coords = descent_loewy::facealg::invariant_coordinates(&g.faces, &sums[o])?;
            if coords != eps[c] {
                agree = false;
            }
        }
        checks.push(Check::new(
            "orbit idempotents equal orbit sums of e_X",
            agree,
            format!("{} orbits", data.len()),
        ));
    }
    Ok(checks)
}

fn suite_antiiso(sys: &CoxeterSystem) -> CliResult<Vec<Check>> {
    let r = verify_anti_isomorphism(sys)?;
    let detail = if r.passed() {
        format!("{} basis pairs reversed", r.pairs_checked)
    } else {
        let (j, k) = r.failures.first().copied().unwrap_or((0, 0));
        format!(
            "{} of {} pairs fail, first ({}, {})",
            r.failures.len(),
            r.pairs_checked,
            subset_label(j),
            subset_label(k)
        )
    };
    Ok(vec![Check::new("anti-isomorphism", r.passed(), detail)])
}

fn suite_phi(sys: &CoxeterSystem) -> CliResult<Vec<Check>> {
    require_face_algebra(sys)?;
    let g = geometry(sys)?;
    let r = verify_phi(&g)?;
    let first = |prefix: &str| {
        r.failures
            .iter()
            .find(|f| f.contains(prefix))
            .cloned()
            .unwrap_or_default()
    };
    Ok(vec![
        Check::new(
            "surjectivity",
            r.image_dim == r.face_count,
            format!("image dimension {} of {}", r.image_dim, r.face_count),
        ),
        Check::new(
            "equivariance",
            r.equivariant,
            if r.equivariant { "vertices and arrows, all generators".into() } else { first("equivariant") },
        ),
        Check::new(
            "representative independence",
            r.representative_independent,
            if r.representative_independent { "every face of each target support".into() } else { first("representative") },
        ),
        Check::new(
            "kernel",
            r.length_two_sum_vanishes && r.path_count - r.ideal_dim.min(r.path_count) == r.face_count,
            format!(
                "dim kQ = {}, dim I = {}, dim kF = {}, length-two sum killed: {}",
                r.path_count, r.ideal_dim, r.face_count, r.length_two_sum_vanishes
            ),
        ),
    ])
}

fn suite_lemmas(sys: &CoxeterSystem) -> CliResult<Vec<Check>> {
    let q = invariant_quiver(sys)?;
    let poset = sys.parabolic_orbit_poset()?;
    let mut checks = vec![
        Check::new("no oriented cycles", q.quiver.is_acyclic(), format!("{} arrows", q.quiver.arrows.len())),
        Check::new(
            "top orbit has out-degree 0",
            q.quiver.out_degree(q.top) == 0,
            format!("out-degree {}", q.quiver.out_degree(q.top)),
        ),
        Check::new("arrows descend in the orbit poset", q.arrows_descend(&poset), ""),
    ];
    let longest = q.quiver.longest_path().unwrap_or(0);
    checks.push(Check::new(
        "Loewy length at most one more than the longest path",
        q.loewy_length <= 1 + longest,
        format!("Loewy length {}, longest path {}", q.loewy_length, longest),
    ));
    if sys.family() == Family::D {
        let g = geometry(sys)?;
        let c = certify_type_d(&g, Some(&q))?;
        let arr = &g.arrangement;
        let to_orbit: Vec<usize> = q.types.iter().map(|&j| g.lattice.orbit_of_type(&g.faces, j)).collect();
        let mut even_ok = true;
        let mut odd_ok = true;
        for a in &q.quiver.arrows {
            let (s, t) = (to_orbit[a.source], to_orbit[a.target]);
            let (x, y) = (g.lattice.orbit_representative(s), g.lattice.orbit_representative(t));
            let ex = signed_partition(arr, g.lattice.element(x))?.even_odd();
            let ey = signed_partition(arr, g.lattice.element(y))?.even_odd();
            if ey.0 > ex.0 {
                even_ok = false;
            }
            let covers = g.lattice.orbits()[s]
                .iter()
                .any(|&u| g.lattice.lower_covers(u).iter().any(|&v| g.lattice.orbit_of(v) == t));
            if covers && ex.1 != 1 {
                odd_ok = false;
            }
        }
        checks.push(Check::new("arrows do not increase Even", even_ok, ""));
        checks.push(Check::new("arrows between cover-related orbits have Odd = 1", odd_ok, ""));
        checks.push(Check::new(
            "longest surviving path within the bound",
            c.within_bound(),
            format!("longest {} <= {}", c.longest_surviving_path, c.bound),
        ));
        checks.push(Check::new(
            "computed arrows survive every exclusion",
            c.contradictions.is_empty(),
            format!("{} contradictions", c.contradictions.len()),
        ));
    }
    Ok(checks)
}

/// Runs a verification suite. `all` skips suites whose objects exceed the
/// caps and records them as skipped.
pub fn cmd_verify(suite: Suite, family: Family, rank: usize, opts: &Options) -> CliResult<Outcome> {
    let start = Instant::now();
    let sys = system(family, rank, opts)?;
    let suites = match suite {
        Suite::All => vec![Suite::Semigroup, Suite::Idempotents, Suite::AntiIso, Suite::Phi, Suite::Lemmas],
        s => vec![s],
    };
    let mut results = Vec::new();
    let mut skipped = Vec::new();
    for s in suites {
        let checks = match s {
            Suite::Semigroup => suite_semigroup(&sys),
            Suite::Idempotents => suite_idempotents(&sys, opts),
            Suite::AntiIso => suite_antiiso(&sys),
            Suite::Phi => suite_phi(&sys),
            Suite::Lemmas => suite_lemmas(&sys),
            Suite::All => unreachable!("expanded above"),
        };
        match checks {
            Ok(c) => results.push((s, c)),
            Err(CliError::Cap(msg)) if suite == Suite::All => skipped.push((s, msg)),
            Err(e) => return Err(e),
        }
    }
    let mut text = String::new();
    let mut first_failure = None;
    for (s, checks) in &results {
        for c in checks {
            let _ = writeln!(
                text,
                "[{}] {}: {}{}",
                if c.passed { "pass" } else { "FAIL" },
                s.name(),
                c.name,
                if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) }
            );
            if !c.passed && first_failure.is_none() {
                first_failure = Some(format!("{}: {} ({})", s.name(), c.name, c.detail));
            }
        }
    }
    for (s, msg) in &skipped {
        let _ = writeln!(text, "[skip] {}: {msg}", s.name());
    }
    let count: usize = results.iter().map(|(_, c)| c.len()).sum();
    let passed = first_failure.is_none();
    let _ = writeln!(
        text,
        "{}: {} ({} checks)",
        sys.name(),
        if passed { "pass" } else { "FAIL" },
        count
    );
    let payload = json!({
        "schema": "verify/1",
        "suite": suite.name(),
        "passed": passed,
        "check_count": count,
        "suites": results.iter().map(|(s, c)| json!({"suite": s.name(), "checks": c})).collect::<Vec<_>>(),
        "skipped": skipped.iter().map(|(s, m)| json!({"suite": s.name(), "reason": m})).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        report: report("verify", &sys, payload, start),
        text,
        passed,
        first_failure,
    })
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, Default)]
pub struct QuiverOptions {
    pub invariant: bool,
    pub dot: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

fn quiver_text(labels: &[String], arrows: &[(usize, usize, usize)]) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "vertices ({}):", labels.len());
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(text, "  {i:>4}  {l}");
    }
    let _ = writeln!(text, "arrows ({}):", arrows.len());
    for &(s, t, m) in arrows {
        let mult = if m == 1 { String::new() } else { format!(" x{m}") };
        let _ = writeln!(text, "  {} -> {}{mult}", labels[s], labels[t]);
    }
    text
}

/// The quiver `Q` of `kF` or, with `invariant`, the quiver of `(kF)^W`.
pub fn cmd_quiver(family: Family, rank: usize, opts: &Options, qopts: &QuiverOptions) -> CliResult<Outcome> {
    let start = Instant::now();
    let sys = system(family, rank, opts)?;
    let (quiver, mut payload, mut text, passed) = if qopts.invariant {
        let iq: InvariantQuiver = invariant_quiver(&sys)?;
        let classes = iq.quiver.labels.len();
        let lattice_orbits = if face_count(&sys)? <= LATTICE_CROSS_CHECK_FACES as u64 {
            Some(geometry(&sys)?.lattice.orbit_count())
        } else {
            None
        };
        let top_isolated = iq.quiver.out_degree(iq.top) == 0;
        let mut text = String::new();
        match lattice_orbits {
            Some(k) => {
                let _ = writeln!(text, "|L/W| = {k}, |S/~| = {classes}{}", if k == classes { "" } else { "  MISMATCH" });
            }
            None => {
                let _ = writeln!(text, "|S/~| = {classes} (lattice cross-check skipped)");
            }
        }
        let _ = writeln!(
            text,
            "top vertex {} out-degree {}; longest path {}; Loewy length {}",
            iq.quiver.labels[iq.top],
            iq.quiver.out_degree(iq.top),
            iq.quiver.longest_path().unwrap_or(0),
            iq.loewy_length
        );
        let passed = top_isolated && lattice_orbits.is_none_or(|k| k == classes);
        let payload = json!({
            "schema": "quiver/1",
            "invariant": true,
            "class_count": classes,
            "lattice_orbit_count": lattice_orbits,
            "top": iq.top,
            "top_out_degree": iq.quiver.out_degree(iq.top),
            "types": iq.types.iter().map(|&j| subset_label(j)).collect::<Vec<_>>(),
            "dims": iq.dims,
            "longest_path": iq.quiver.longest_path(),
            "loewy_length": iq.loewy_length,
        });
        (iq.quiver, payload, text, passed)
    } else {
        require_face_algebra(&sys)?;
        let g = geometry(&sys)?;
        let q = build_q(&g);
        let text = format!("lattice elements {}, covers {}\n", g.lattice.len(), g.lattice.cover_count());
        let payload = json!({"schema": "quiver/1", "invariant": false});
        (q, payload, text, true)
    };
    let arrows: Vec<(usize, usize, usize)> = quiver.arrows.iter().map(|a| (a.source, a.target, a.multiplicity)).collect();
    text.push_str(&quiver_text(&quiver.labels, &arrows));
    let _ = writeln!(text, "{} vertices, {} arrows", quiver.labels.len(), quiver.arrows.len());
    payload["vertex_count"] = json!(quiver.labels.len());
    payload["arrow_count"] = json!(quiver.arrows.len());
    payload["quiver"] = serde_json::to_value(&quiver).map_err(internal)?;
    let name = format!("{}{}", sys.name(), if qopts.invariant { "-invariant" } else { "" });
    if let Some(p) = &qopts.dot {
        write_file(p, &quiver.to_dot(&name))?;
    }
    let report = report("quiver", &sys, payload, start);
    if let Some(p) = &qopts.json {
        write_file(p, &report.stable().to_json())?;
    }
    Ok(Outcome {
        report,
        text,
        passed,
        first_failure: (!passed).then(|| "invariant quiver cross-check failed".to_string()),
    })
}

#[derive(Clone, Debug, Serialize)]
struct OrbitRow {
    class: usize,
    label: String,
    members: Vec<String>,
    dim: usize,
    normalizer_index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    even_odd: Option<(usize, usize)>,
}

/// The classes of `S/~` with their members, dimensions, normalizer indices
/// and, for type D, the Even/Odd counts.
pub fn cmd_orbits(family: Family, rank: usize, opts: &Options) -> CliResult<Outcome> {
    let start = Instant::now();
    let sys = system(family, rank, opts)?;
    let arr = Arrangement::new(&sys);
    let poset = sys.parabolic_orbit_poset()?;
    let mut rows = Vec::with_capacity(poset.len());
    for c in 0..poset.len() {
        let j: SubsetJ = poset.representative(c);
        let even_odd = if family == Family::D {
            let zs = arr.sign_vector_int(&sys.face_point(j)).zero_set(arr.full_mask());
            Some(signed_partition(&arr, &arr.subspace(zs))?.even_odd())
        } else {
            None
        };
        rows.push(OrbitRow {
            class: c,
            label: orbit_label(&sys, &arr, j),
            members: poset.members(c).iter().map(|&m| subset_label(m)).collect(),
            dim: rank - j.count_ones() as usize,
            normalizer_index: sys.normalizer_index(j)?,
            even_odd,
        });
    }
    let mut text = String::new();
    let _ = writeln!(text, "{}: {} classes", sys.name(), rows.len());
    for r in &rows {
        let eo = r.even_odd.map(|(e, o)| format!("  even {e} odd {o}")).unwrap_or_default();
        let _ = writeln!(
            text,
            "  {:>3}  {:<20} dim {}  lambda {}{}  [{}]",
            r.class,
            r.label,
            r.dim,
            r.normalizer_index,
            eo,
            r.members.join(" ")
        );
    }
    let payload = json!({"schema": "orbits/1", "classes": rows});
    Ok(Outcome {
        report: report("orbits", &sys, payload, start),
        text,
        passed: true,
        first_failure: None,
    })
}

/// Writes the stable report to `path`.
pub fn export_report(outcome: &Outcome, path: &Path) -> CliResult<()> {
    write_file(path, &outcome.report.stable().to_json())
}
