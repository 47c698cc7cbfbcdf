//! Run reports and the reference suite: every published value the library
//! recomputes, checked with a verdict per item.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::focal::{
    f4_comitant, focal_quantities, graded_types_by_probe, isobarity_by_probe, random_point, restrict_check,
    solve_point_matrix, structure, FreeChoice, PseudoSystem,
};
use crate::hilbert::{self, rho_bound};
use crate::lie::{self, ComitantType, ComitantVerdict};
use crate::linalg::Deadline;
use crate::poly::{int, Monomial, Poly, Rational, Symbols, VarId};
use crate::system::{Signature, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A known sign or normalization conflict with the published value:
    /// magnitudes agree, the difference is reported but does not fail a run.
    LoggedDiscrepancy,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::LoggedDiscrepancy => "logged-discrepancy",
        }
    }

    fn of(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub verdict: Verdict,
}

/// Uniform result of every command: echo of the inputs, a structured payload
/// and a list of checks.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: serde_json::Value,
    pub checks: Vec<Check>,
    pub elapsed_ms: u128,
}

impl RunReport {
    pub fn new(command: impl Into<String>, inputs: serde_json::Value) -> RunReport {
        RunReport { command: command.into(), inputs, results: json!({}), checks: Vec::new(), elapsed_ms: 0 }
    }

    pub fn check(&mut self, name: impl Into<String>, expected: impl Into<String>, got: impl Into<String>, verdict: Verdict) {
        self.checks.push(Check { name: name.into(), expected: expected.into(), got: got.into(), verdict });
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }

    /// Plain-text table of the checks, one line each.
    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{:<18} {:<width$}  expected: {}  got: {}", c.verdict.label(), c.name, c.expected, c.got);
        }
        out
    }
}

/// `1/2 [g(l - h) - k(h + n) + m(l + n)]`.
pub const REFERENCE_L1: &str = "1/2*g*l - 1/2*g*h - 1/2*k*h - 1/2*k*n + 1/2*m*l + 1/2*m*n";

/// Published `24 L2` for `s(1,2)` on the variety chart.
pub const REFERENCE_24_L2: &str = "62*g^3*h - 2*g*h^3 + 95*g^2*h*k - 2*h^3*k + 38*g*h*k^2 + 5*h*k^3 \
    - 62*g^3*l + 27*g*h^2*l - 39*g^2*k*l + 29*h^2*k*l - 15*g*k^2*l - 8*g*h*l^2 + 15*h*k*l^2 - 5*g*l^3 \
    + 53*g^2*h*m + 66*g*h*k*m + 13*h*k^2*m - 127*g^2*l*m - 6*h^2*l*m - 68*g*k*l*m - 15*k^2*l*m \
    - 13*h*l^2*m - 5*l^3*m + 6*g*h*m^2 + 6*h*k*m^2 - 63*g*l*m^2 - 29*k*l*m^2 + 2*l*m^3 + 6*g^3*n \
    + 61*g*h^2*n + 72*g^2*k*n + 63*h^2*k*n + 33*g*k^2*n + 5*k^3*n - 10*g*h*l*n + 68*h*k*l*n \
    - 33*g*l^2*n + 15*k*l^2*n - 72*g^2*m*n - 6*h^2*m*n + 10*g*k*m*n + 8*k^2*m*n - 66*h*l*m*n \
    - 38*l^2*m*n - 61*g*m^2*n - 27*k*m^2*n + 2*m^3*n + 72*g*h*n^2 + 127*h*k*n^2 - 72*g*l*n^2 \
    + 39*k*l*n^2 - 53*h*m*n^2 - 95*l*m*n^2 - 6*g*n^3 + 62*k*n^3 - 62*m*n^3";

/// Published first-order matrix for `s(1,2)`, columns `a0..a3, b0..b4, G1`.
/// `None` marks entries printed inconsistently; their corrected values are
/// in [`REFERENCE_A1_CORRECTED`].
pub const REFERENCE_A1: [[Option<&str>; 10]; 9] = {
    const Z: Option<&str> = Some("0");
    [
        [Some("3*c"), Some("3*e"), Z, Z, Z, Z, Z, Z, Z, Z],
        [Some("3*d"), Some("6*c + 3*f"), Some("6*e"), Z, Z, Z, Z, Z, Z, Z],
        [Z, Some("6*d"), None, Some("3*e"), Z, Z, Z, Z, Z, Z],
        [Z, Z, Some("3*d"), Some("3*f"), Z, Z, Z, Z, Z, Z],
        [Some("3*g"), Some("3*l"), Z, Z, Some("4*c"), Some("4*e"), Z, Z, Z, Some("-e^2")],
        [
            Some("6*h"),
            Some("6*g + 6*m"),
            Some("6*l"),
            Z,
            Some("4*d"),
            Some("4*f + 12*c"),
            Some("12*e"),
            Z,
            Z,
            Some("2*c*e - 2*e*f"),
        ],
        [
            Some("3*k"),
            Some("12*h + 3*n"),
            Some("3*g + 12*m"),
            Some("3*l"),
            Z,
            Some("12*d"),
            Some("12*c + 12*f"),
            Some("12*e"),
            Z,
            None,
        ],
        [Z, Some("6*k"), Some("6*h + 6*n"), Some("6*m"), Z, Z, Some("12*d"), Some("12*f + 4*c"), None, Some("2*d*f - 2*c*d")],
        [Z, Z, Some("3*k"), Some("3*n"), Z, Z, Z, Some("4*d"), Some("4*f"), Some("-d^2")],
    ]
};

/// `(row, column, corrected value)` for the inconsistently printed entries.
pub const REFERENCE_A1_CORRECTED: [(usize, usize, &str); 3] =
    [(2, 2, "3*c + 6*f"), (6, 9, "2*d*e - c^2 + 2*c*f - f^2"), (7, 8, "4*e")];

/// Published right-hand side; `None` as above.
pub const REFERENCE_C1: [Option<&str>; 9] = [
    Some("2*e*g + f*l - c*l"),
    Some("f*g + 2*f*m - c*g - 2*c*m - 2*d*l + 4*e*h"),
    None,
    Some("f*k - c*k - 2*d*n"),
    Some("0"),
    Some("0"),
    Some("0"),
    Some("0"),
    Some("0"),
];

pub const REFERENCE_C1_CORRECTED: (usize, &str) = (2, "2*f*h + f*n - 2*c*h - c*n + 2*e*k - 4*d*m");

/// Published graded types of the pseudo-quantities of `s(1,2,3)`, `k = 1, 2, 3`.
pub const REFERENCE_S123_TYPES: [&[(u32, [u32; 3])]; 3] = [
    &[(4, [8, 2, 0]), (4, [9, 0, 1])],
    &[(6, [20, 4, 0]), (6, [21, 2, 1]), (6, [22, 0, 2])],
    &[(8, [37, 6, 0]), (8, [38, 4, 1]), (8, [39, 2, 2]), (8, [40, 0, 3])],
];

/// Published isobarity pairs of `G_{1,i}`, `i = 0..4`.
pub const REFERENCE_G1_ISOBARITY: [(i64, i64); 5] = [(3, -1), (2, 0), (1, 1), (0, 2), (-1, 3)];

/// Published isobarity of `G_{2,i,j}` (free `b_i`, `c_j`): `(7 - i - j, -3 + i + j)`.
pub fn reference_table_isobarity(i: u32, j: u32) -> (i64, i64) {
    (7 - i as i64 - j as i64, -3 + i as i64 + j as i64)
}

/// Published coefficients of the quartic comitant in `G_{1,i} x^(4-i) y^i`,
/// and the published factor in `f4|V = factor * L1 (x^2+y^2)^2`.
pub const REFERENCE_F4_COEFFICIENTS: [i64; 5] = [1, 4, 2, 4, 1];
pub const REFERENCE_F4_VARIETY_FACTOR: i64 = -8;

/// Published first focal quantity of `s(1,2,3)`:
/// `1/4 {[g(l-h) - k(h+n) + m(l+n)] - 3[p + r + u + v]}`.
pub const REFERENCE_S123_L1: &str =
    "1/4*g*l - 1/4*g*h - 1/4*k*h - 1/4*k*n + 1/4*m*l + 1/4*m*n - 3/4*p - 3/4*r - 3/4*u - 3/4*v";

/// The six generators of the comitants of `s(0,1)` with their types and
/// weights.
pub const S01_GENERATORS: [(&str, &str, u32, [u32; 2], i64); 6] = [
    ("i1", "c + f", 0, [0, 1], 0),
    ("i2", "c^2 + 2*d*e + f^2", 0, [0, 2], 0),
    ("i3", "-e*a^2 + c*a*b - f*a*b + d*b^2", 0, [2, 1], -1),
    ("k1", "-b*x + a*y", 1, [1, 0], -1),
    ("k2", "-e*x^2 + c*x*y - f*x*y + d*y^2", 2, [0, 1], -1),
    ("k3", "-e*a*x - f*b*x + c*a*y + d*b*y", 1, [1, 1], -1),
];

/// Suite-wide limit on each symbolic step.
const STEP_BUDGET: Duration = Duration::from_secs(120);

fn deadline() -> Deadline {
    Deadline(Some(Instant::now() + STEP_BUDGET))
}

fn within(name: &str, start: Instant, limit: Duration, report: &mut RunReport) {
    let took = start.elapsed();
    report.check(
        format!("{name} runtime"),
        format!("< {} s", limit.as_secs_f64()),
        format!("{:.3} s", took.as_secs_f64()),
        Verdict::of(took < limit),
    );
}

fn s12_variety() -> SystemSpec {
    SystemSpec::build_generic(Signature::s12()).restrict_to_variety().expect("s(1,2) has a variety chart")
}

fn render(spec: &SystemSpec, p: &Poly) -> String {
    spec.render(p)
}

fn types_text(types: &[ComitantType]) -> String {
    types.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Runs the whole reference suite with the given seed for random points.
pub fn reference_suite(seed: u64) -> RunReport {
    let started = Instant::now();
    let mut report = RunReport::new("verify", json!({ "seed": seed }));
    let mut timings = serde_json::Map::new();
    type Section = fn(u64, &mut RunReport);
    let sections: [(&str, Section, u64); 10] = [
        ("1", first_focal_quantity, 1),
        ("2", second_focal_quantity, 30),
        ("3", restriction_to_variety, 120),
        ("4", matrix_structure, 60),
        ("5", degrees_and_types, 300),
        ("6", comitant_suite, 60),
        ("7", isobarity, 120),
        ("8", hilbert_and_krull, 1),
        ("9", cubic_consistency, 30),
        ("10", properties, 120),
    ];
    for (id, run, limit) in sections {
        let t = Instant::now();
        run(seed, &mut report);
        within(&format!("criterion {id}"), t, Duration::from_secs(limit), &mut report);
        timings.insert(id.to_string(), json!(t.elapsed().as_millis() as u64));
    }
    independence_envelope(seed, &mut report);
    report.results = json!({ "criterion_ms": timings });
    report.elapsed_ms = started.elapsed().as_millis();
    report
}

fn first_focal_quantity(_seed: u64, report: &mut RunReport) {
    let v = s12_variety();
    let expect = v.parse_poly(REFERENCE_L1).expect("reference text");
    match focal_quantities(&v, 1) {
        Ok(seq) => report.check(
            "1 L1 of s(1,2)",
            render(&v, &expect),
            render(&v, &seq.l[0]),
            Verdict::of(seq.l[0] == expect),
        ),
        Err(e) => report.check("1 L1 of s(1,2)", render(&v, &expect), e.to_string(), Verdict::Fail),
    }
}

fn second_focal_quantity(_seed: u64, report: &mut RunReport) {
    let v = s12_variety();
    let printed = v.parse_poly(REFERENCE_24_L2).expect("reference text");
    let got = match focal_quantities(&v, 2) {
        Ok(seq) => {
            let diff = &seq.l[1].scale(&int(24)) - &printed;
            match diff.divide_exact(&seq.l[0]) {
                Ok(q) => format!("24 L2 - printed = ({}) * L1", render(&v, &q)),
                Err(_) => "difference not divisible by L1".to_string(),
            }
        }
        Err(e) => e.to_string(),
    };
    let ok = got == "24 L2 - printed = (0) * L1";
    report.check("2 L2 of s(1,2) modulo L1", "24 L2 - printed = (0) * L1", got, Verdict::of(ok));
}

fn restriction_to_variety(seed: u64, report: &mut RunReport) {
    let generic = SystemSpec::build_generic(Signature::s12());
    for k in 1..=3 {
        let got = match restrict_check(&generic, k, &FreeChoice::default_for(k), 10, seed) {
            Ok(r) => r.g_equals_l,
            Err(_) => false,
        };
        report.check(
            format!("3 G{k}|V = L{k} at 10 points"),
            "equal at every point",
            if got { "equal at every point" } else { "mismatch" },
            Verdict::of(got),
        );
    }
}

fn matrix_structure(_seed: u64, report: &mut RunReport) {
    let generic = SystemSpec::build_generic(Signature::s12());
    let sys = PseudoSystem::build(&generic, 1).expect("s(1,2) system");
    let p = |t: &str| generic.parse_poly(t).expect("reference text");
    let mut mismatches = Vec::new();
    let mut skipped = 0;
    for (i, row) in REFERENCE_A1.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            match entry {
                Some(t) if *sys.a.get(i, j) != p(t) => mismatches.push(format!("A[{i}][{j}]")),
                Some(_) => {}
                None => skipped += 1,
            }
        }
    }
    for (i, entry) in REFERENCE_C1.iter().enumerate() {
        match entry {
            Some(t) if sys.c[i] != p(t) => mismatches.push(format!("C[{i}]")),
            Some(_) => {}
            None => skipped += 1,
        }
    }
    report.check(
        "4 k=1 matrix vs printed",
        format!("9x10, all consistently printed entries equal ({skipped} excluded)"),
        format!("{}x{}, mismatches: [{}]", sys.m(), sys.n(), mismatches.join(", ")),
        Verdict::of(mismatches.is_empty() && sys.m() == 9 && sys.n() == 10),
    );
    let mut corrected_ok = REFERENCE_A1_CORRECTED.iter().all(|&(i, j, t)| *sys.a.get(i, j) == p(t));
    corrected_ok &= sys.c[REFERENCE_C1_CORRECTED.0] == p(REFERENCE_C1_CORRECTED.1);
    report.check(
        "4 k=1 corrected entries",
        "A[2][2], A[6][9], A[7][8], C[2] equal corrected values",
        if corrected_ok { "equal" } else { "differ" },
        Verdict::of(corrected_ok),
    );
    let sizes: Vec<(u32, usize, usize)> = (1..=5)
        .map(|k| {
            let s = PseudoSystem::build(&generic, k).expect("s(1,2) system");
            (k, s.m(), s.n())
        })
        .collect();
    let ok = sizes.iter().all(|&(k, m, n)| m == (k * (2 * k + 7)) as usize && n == m + k as usize);
    report.check(
        "4 sizes m = k(2k+7), n = m + k, k=1..5",
        "(9,10) (22,24) (39,42) (60,64) (85,90)",
        sizes.iter().map(|(_, m, n)| format!("({m},{n})")).collect::<Vec<_>>().join(" "),
        Verdict::of(ok),
    );
}

fn degrees_and_types(seed: u64, report: &mut RunReport) {
    let s12 = SystemSpec::build_generic(Signature::s12());
    for k in 1..=3u32 {
        let expect = structure(&Signature::s12(), k).expect("s(1,2) structure");
        let got = PseudoSystem::build(&s12, k)
            .map_err(|e| e.to_string())
            .and_then(|sys| graded_types_by_probe(&s12, &sys, &FreeChoice::default_for(k), seed).map_err(|e| e.to_string()));
        let (text, ok) = match got {
            Ok(types) => {
                let n: u32 = types.first().map_or(0, |t| t.d.iter().sum());
                (format!("{} N={n}", types_text(&types)), types == expect.types && n == expect.total_degree)
            }
            Err(e) => (e, false),
        };
        report.check(
            format!("5 G{k} degrees s(1,2)"),
            format!("{} N={}", types_text(&expect.types), expect.total_degree),
            text,
            Verdict::of(ok),
        );
    }
    let s123 = SystemSpec::build_generic(Signature::s123());
    for (idx, printed) in REFERENCE_S123_TYPES.iter().enumerate() {
        let k = idx as u32 + 1;
        let expect: Vec<ComitantType> = printed.iter().map(|(d, t)| ComitantType::new(*d, t.to_vec())).collect();
        let got = PseudoSystem::build(&s123, k)
            .map_err(|e| e.to_string())
            .and_then(|sys| graded_types_by_probe(&s123, &sys, &FreeChoice::default_for(k), seed).map_err(|e| e.to_string()));
        let (text, ok) = match got {
            Ok(types) => (types_text(&types), types == expect),
            Err(e) => (e, false),
        };
        report.check(format!("5 G{k} graded types s(1,2,3)"), types_text(&expect), text, Verdict::of(ok));
    }
}

fn comitant_suite(_seed: u64, report: &mut RunReport) {
    let s01 = SystemSpec::build_generic(Signature::s01());
    let ops = lie::operators(&s01).expect("s(0,1) operators");
    let mut gens = HashMap::new();
    for (name, text, delta, d, weight) in S01_GENERATORS {
        let p = s01.parse_poly(text).expect("generator text");
        let expect = format!("{} weight {weight}", ComitantType::new(delta, d.to_vec()));
        let (got, ok) = match lie::is_comitant(&p, &s01, &ops) {
            Ok(ComitantVerdict::Comitant { ctype, weight: w }) => {
                let t = format!("{ctype} weight {w}");
                let ok = t == expect;
                (t, ok)
            }
            Ok(other) => (format!("{other:?}"), false),
            Err(e) => (e.to_string(), false),
        };
        report.check(format!("6 generator {name}"), expect, got, Verdict::of(ok));
        gens.insert(name, p);
    }
    let g = |n: &str| &gens[n];
    let a = &(g("i1") * g("k1")) - g("k3");
    let syzygy = &(&(&(&a * &a) + &(g("k3") * g("k3"))) - &(&(g("i2") * g("k1")) * g("k1")))
        - &(&(g("i3") * g("k2")).scale(&int(2)));
    report.check(
        "6 syzygy (i1k1-k3)^2 + k3^2 - i2k1^2 - 2i3k2",
        "0",
        render(&s01, &syzygy),
        Verdict::of(syzygy.is_zero()),
    );

    let s12 = SystemSpec::build_generic(Signature::s12());
    let ops = lie::operators(&s12).expect("s(1,2) operators");
    match f4_comitant(&s12, &ops, deadline()) {
        Ok(f4) => {
            let (got, ok) = match &f4.verdict {
                ComitantVerdict::Comitant { ctype, weight } => {
                    let t = format!("{ctype} weight {weight}");
                    let ok = t == "(4,8,2) weight -1";
                    (t, ok)
                }
                other => (format!("{other:?}"), false),
            };
            report.check("6 f4' comitant", "(4,8,2) weight -1", got, Verdict::of(ok));
            let coeffs: Vec<Option<Rational>> = f4.coefficient_ratios.clone();
            let printed: Vec<Rational> = REFERENCE_F4_COEFFICIENTS.iter().map(|&c| int(c)).collect();
            report.check(
                "6 f4' coefficients of G_{1,i}",
                join(&printed),
                coeffs.iter().map(opt_text).collect::<Vec<_>>().join(", "),
                sign_verdict(&coeffs, &printed),
            );
            let factor = vec![f4.variety_ratio.clone()];
            report.check(
                "6 f4'|V = factor * L1 (x^2+y^2)^2",
                REFERENCE_F4_VARIETY_FACTOR.to_string(),
                opt_text(&f4.variety_ratio),
                sign_verdict(&factor, &[int(REFERENCE_F4_VARIETY_FACTOR)]),
            );
        }
        Err(e) => report.check("6 f4' comitant", "(4,8,2) weight -1", e.to_string(), Verdict::Fail),
    }
}

fn opt_text(r: &Option<Rational>) -> String {
    r.as_ref().map_or("none".to_string(), ToString::to_string)
}

fn join(v: &[Rational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Pass on exact agreement, logged discrepancy when only signs differ.
fn sign_verdict(got: &[Option<Rational>], expected: &[Rational]) -> Verdict {
    if got.len() != expected.len() || got.iter().any(Option::is_none) {
        return Verdict::Fail;
    }
    let got: Vec<Rational> = got.iter().flatten().cloned().collect();
    if got == expected {
        Verdict::Pass
    } else if got.iter().zip(expected).all(|(a, b)| a.abs() == b.abs()) {
        Verdict::LoggedDiscrepancy
    } else {
        Verdict::Fail
    }
}

fn isobarity(seed: u64, report: &mut RunReport) {
    let generic = SystemSpec::build_generic(Signature::s12());
    let ops = lie::operators(&generic).expect("s(1,2) operators");
    let got: Result<Vec<(i64, i64)>, String> = (0..=4u32)
        .map(|i| {
            let sys = PseudoSystem::build(&generic, 1).map_err(|e| e.to_string())?;
            sys.solve_symbolic(&FreeChoice::default_for(1).with(4, i), deadline())
                .map_err(|e| e.to_string())
                .and_then(|sol| lie::isobarity_of(&sol.numerator_core, &generic, &ops).map_err(|e| e.to_string()))
        })
        .collect();
    let expect = pairs_text(&REFERENCE_G1_ISOBARITY);
    match got {
        Ok(pairs) => {
            let ok = pairs == REFERENCE_G1_ISOBARITY;
            report.check("7 isobarity of G_{1,i}", expect, pairs_text(&pairs), Verdict::of(ok));
        }
        Err(e) => report.check("7 isobarity of G_{1,i}", expect, e, Verdict::Fail),
    }

    let sys = PseudoSystem::build(&generic, 2).expect("s(1,2) system");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exact = 0;
    let mut negated = 0;
    let mut bad = Vec::new();
    for point_index in 0..5 {
        let point = random_point(&generic, &mut rng);
        for i in 0..=4u32 {
            for j in 0..=6u32 {
                let free = FreeChoice::default_for(2).with(4, i).with(6, j);
                let want = reference_table_isobarity(i, j);
                match isobarity_by_probe(&generic, &ops, &sys, &free, &point) {
                    Ok(w) if w == want => exact += 1,
                    Ok(w) if w == (-want.0, -want.1) => negated += 1,
                    Ok(w) => bad.push(format!("p{point_index} b{i} c{j}: {w:?}")),
                    Err(e) => bad.push(format!("p{point_index} b{i} c{j}: {e}")),
                }
            }
        }
    }
    let verdict = if !bad.is_empty() {
        Verdict::Fail
    } else if negated == 0 {
        Verdict::Pass
    } else {
        Verdict::LoggedDiscrepancy
    };
    report.check(
        "7 isobarity table of G_{2,i,j} at 5 points",
        "(7-i-j, -3+i+j) for 175 probes",
        format!("{exact} exact, {negated} negated, {} other {}", bad.len(), bad.join("; ")),
        verdict,
    );
}

fn pairs_text(p: &[(i64, i64)]) -> String {
    p.iter().map(|(a, b)| format!("({a},{b})")).collect::<Vec<_>>().join(" ")
}

fn hilbert_and_krull(_seed: u64, report: &mut RunReport) {
    let s = hilbert::common_s01().krull_dimension();
    let si = hilbert::common_si01().krull_dimension();
    let got = format!("{}, {}", s.map_or_else(|e| e.to_string(), |k| k.to_string()), si.map_or_else(|e| e.to_string(), |k| k.to_string()));
    report.check("8 Krull dimension of S01, SI01", "5, 3", got.clone(), Verdict::of(got == "5, 3"));
    let rho: Vec<u32> = ["1,2", "1,3", "1,2,3"]
        .iter()
        .map(|t| rho_bound(&Signature::parse(t).expect("signature")))
        .collect();
    report.check("8 rho bound s(1,2), s(1,3), s(1,2,3)", "9, 11, 17", format!("{}, {}, {}", rho[0], rho[1], rho[2]), Verdict::of(rho == [9, 11, 17]));
    let sigs = signatures_up_to(12);
    let bad: Vec<String> = sigs
        .iter()
        .filter(|s| rho_bound(s) as usize != s.slot_count() - 1)
        .map(ToString::to_string)
        .collect();
    report.check(
        "8 rho bound = slots - 1, sum of degrees <= 12",
        format!("{} signatures agree", sigs.len()),
        format!("{} agree, disagreeing: [{}]", sigs.len() - bad.len(), bad.join(", ")),
        Verdict::of(bad.is_empty()),
    );
}

/// Every valid signature (distinct degrees including 1) with degree sum `<= max`.
pub fn signatures_up_to(max: u32) -> Vec<Signature> {
    let mut out = Vec::new();
    let others: Vec<u32> = (0..=max).filter(|&d| d != 1).collect();
    for mask in 0u32..(1 << others.len()) {
        let mut degrees: Vec<u32> = others.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &d)| d).collect();
        degrees.push(1);
        degrees.sort_unstable();
        if degrees.iter().sum::<u32>() <= max {
            if let Ok(s) = Signature::new(degrees) {
                out.push(s);
            }
        }
    }
    out
}

fn cubic_consistency(_seed: u64, report: &mut RunReport) {
    let g3 = SystemSpec::build_generic(Signature::s123());
    let v3 = match g3.restrict_to_variety() {
        Ok(v) => v,
        Err(e) => return report.check("9 s(1,2,3) L1", "computed", e.to_string(), Verdict::Fail),
    };
    let l1 = match focal_quantities(&v3, 1) {
        Ok(seq) => seq.l[0].clone(),
        Err(e) => return report.check("9 s(1,2,3) L1", "computed", e.to_string(), Verdict::Fail),
    };
    let cubic: Vec<VarId> = v3.block(3);
    let zero: HashMap<VarId, Rational> = cubic.iter().map(|v| (*v, Rational::zero())).collect();
    let quadratic_part = l1.eval_partial(&zero);
    let v12 = s12_variety();
    let l1_12 = v12.parse_poly(REFERENCE_L1).expect("reference text");
    let same = v3.render(&quadratic_part) == v12.render(&l1_12);
    report.check("9 s(1,2,3) L1 without cubic terms", v12.render(&l1_12), v3.render(&quadratic_part), Verdict::of(same));

    let cubic_part = &l1 - &quadratic_part;
    let form = v3.parse_poly("p + r + u + w").expect("linear form");
    let multiple = proportional(&cubic_part, &form);
    report.check(
        "9 cubic part of L1 is a multiple of p + r + u + w",
        "rational multiple",
        multiple.as_ref().map_or_else(|| v3.render(&cubic_part), |m| format!("{m} * (p + r + u + w)")),
        Verdict::of(multiple.is_some()),
    );
    let printed = v3.parse_poly(REFERENCE_S123_L1).expect("reference text");
    let verdict = if printed == l1 {
        Verdict::Pass
    } else if multiple.is_some() && same {
        // Known conflict: the printed form differs in the cubic variable, the
        // sign of the cubic term and the overall factor.
        Verdict::LoggedDiscrepancy
    } else {
        Verdict::Fail
    };
    report.check("9 s(1,2,3) L1 vs printed", v3.render(&printed), v3.render(&l1), verdict);
}

fn proportional(a: &Poly, b: &Poly) -> Option<Rational> {
    let (m, c) = b.leading_term()?;
    let r = a.coefficient(m) / c;
    (b.scale(&r) == *a).then_some(r)
}

/// Random polynomial with small integer coefficients in the listed variables.
pub fn random_poly(rng: &mut ChaCha8Rng, vars: &[VarId], terms: usize, max_exp: u32) -> Poly {
    Poly::from_terms((0..terms).map(|_| {
        let m = Monomial::from_pairs(vars.iter().map(|&v| (v, rng.gen_range(0..=max_exp))));
        let c = Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into());
        (m, c)
    }))
}

fn properties(seed: u64, report: &mut RunReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = [VarId::X, VarId::Y, VarId::coeff(0), VarId::coeff(1)];
    let symbols = Symbols::new(["a", "b"]);
    let mut failures = Vec::new();
    let cases = 1000;
    for case in 0..cases {
        let p = random_poly(&mut rng, &vars, 4, 2);
        let q = random_poly(&mut rng, &vars, 3, 2);
        let r = random_poly(&mut rng, &vars, 3, 1);
        let ok = &(&p + &q) + &r == &p + &(&q + &r)
            && &p * &q == &q * &p
            && &(&p * &q) * &r == &p * &(&q * &r)
            && &p * &(&q + &r) == &(&p * &q) + &(&p * &r)
            && (&(&p * &q)).derivative(VarId::X) == &(&p.derivative(VarId::X) * &q) + &(&p * &q.derivative(VarId::X))
            && (q.is_zero() || (&p * &q).divide_exact(&q).as_ref() == Ok(&p))
            && Poly::parse(&p.to_text(&symbols), &symbols).as_ref() == Ok(&p);
        if !ok {
            failures.push(case);
        }
    }
    report.check(
        "10 ring, derivative, division, parse properties",
        format!("{cases} cases hold"),
        format!("{} failures", failures.len()),
        Verdict::of(failures.is_empty()),
    );

    let generic = SystemSpec::build_generic(Signature::s12());
    let ops = lie::operators(&generic).expect("s(1,2) operators");
    let mut closed = true;
    for a in ops.x.iter() {
        for b in ops.x.iter() {
            closed &= lie::decompose(&a.bracket(b), &ops).is_some();
        }
    }
    report.check("10 bracket closure", "all 16 brackets in the span", if closed { "closed" } else { "not closed" }, Verdict::of(closed));

    let k2 = generic.linear_generators().expect("linear part").k2;
    let s = lie::leading_semi_invariant(&k2, 2);
    let round = lie::reconstruct_from_semi_invariant(&s, 2, &ops).map(|r| r == k2).unwrap_or(false);
    report.check("10 reconstruction round trip of k2", "identical", if round { "identical" } else { "differs" }, Verdict::of(round));

    let sys = PseudoSystem::build(&generic, 2).expect("s(1,2) system");
    let free = FreeChoice::default_for(2);
    let mut same = true;
    for _ in 0..3 {
        let point = random_point(&generic, &mut rng);
        let (a, c) = sys.evaluate(&point);
        let mut perm: Vec<usize> = (0..a.rows).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let pc: Vec<Rational> = perm.iter().map(|&i| c[i].clone()).collect();
        let plain = solve_point_matrix(&sys, &free, &a, &c);
        let permuted = solve_point_matrix(&sys, &free, &a.permute_rows(&perm), &pc);
        same &= match (plain, permuted) {
            (Ok(x), Ok(y)) => x.g == y.g && x.numerator_core.abs() == y.numerator_core.abs() && x.numerator_core / x.sigma == y.numerator_core / y.sigma,
            _ => false,
        };
    }
    report.check("10 G under row permutation", "identical", if same { "identical" } else { "differs" }, Verdict::of(same));
}

/// Jacobian rank of `{L1, L2, L3}` on the variety: a sanity envelope.
fn independence_envelope(seed: u64, report: &mut RunReport) {
    let v = s12_variety();
    let got = focal_quantities(&v, 3)
        .map_err(|e| e.to_string())
        .and_then(|seq| lie::independence_rank(&seq.l, 3, seed).map_err(|e| e.to_string()));
    let (text, ok) = match got {
        Ok(r) => (r.to_string(), (2..=6).contains(&r)),
        Err(e) => (e, false),
    };
    report.check("rank of {L1, L2, L3}", "between 2 and 6", text, Verdict::of(ok));
}
