//! The four-dimensional Lie algebra of operators `X1..X4` acting on comitants,
//! built from infinitesimal linear substitutions of the phase plane.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::RatMatrix;
use crate::poly::{int, rat, Monomial, Poly, Rational, VarId};
use crate::system::{Side, Signature, SystemSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("operators act on the symbolic coefficient ring; slot `{0}` is concrete")]
    ConcreteCoefficient(String),
    #[error("polynomial is inhomogeneous in variable group {group}: {first} vs {second}")]
    Inhomogeneous { group: usize, first: String, second: String },
    #[error("polynomial depends on the phase variables")]
    PhaseDependent,
    #[error("not isobaric: {first} has weights {w_first:?}, {second} has weights {w_second:?}")]
    NotIsobaric { first: String, second: String, w_first: (i64, i64), w_second: (i64, i64) },
    #[error("D3^{order}(S) does not vanish; residual {residual}")]
    NotLeadingSemiInvariant { order: u32, residual: String },
    #[error("empty input")]
    Empty,
}

/// `(delta, d_0, ..., d_l)`: degree in the phase variables and in each
/// component's coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComitantType {
    pub delta: u32,
    pub d: Vec<u32>,
}

impl ComitantType {
    pub fn new(delta: u32, d: Vec<u32>) -> ComitantType {
        ComitantType { delta, d }
    }
}

impl fmt::Display for ComitantType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![self.delta.to_string()];
        parts.extend(self.d.iter().map(u32::to_string));
        write!(f, "({})", parts.join(","))
    }
}

/// A derivation of the polynomial ring, stored by its values on the variables
/// (phase variables included).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieOperator {
    images: BTreeMap<VarId, Poly>,
}

impl LieOperator {
    pub fn from_images(images: impl IntoIterator<Item = (VarId, Poly)>) -> LieOperator {
        LieOperator { images: images.into_iter().filter(|(_, p)| !p.is_zero()).collect() }
    }

    pub fn image(&self, v: VarId) -> Poly {
        self.images.get(&v).cloned().unwrap_or_default()
    }

    pub fn images(&self) -> &BTreeMap<VarId, Poly> {
        &self.images
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        let vars = p.variables();
        for (v, img) in &self.images {
            if vars.contains(v) {
                out += img * &p.derivative(*v);
            }
        }
        out
    }

    /// Part acting on coefficient symbols only.
    pub fn coefficient_part(&self) -> LieOperator {
        LieOperator::from_images(self.images.iter().filter(|(v, _)| !v.is_phase()).map(|(v, p)| (*v, p.clone())))
    }

    pub fn bracket(&self, other: &LieOperator) -> LieOperator {
        let mut keys: Vec<VarId> = self.images.keys().chain(other.images.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        LieOperator::from_images(
            keys.into_iter()
                .map(|v| (v, &self.apply(&other.image(v)) - &other.apply(&self.image(v)))),
        )
    }

    pub fn scale(&self, c: &Rational) -> LieOperator {
        LieOperator::from_images(self.images.iter().map(|(v, p)| (*v, p.scale(c))))
    }

    pub fn add(&self, other: &LieOperator) -> LieOperator {
        let mut images = self.images.clone();
        for (v, p) in &other.images {
            let e = images.entry(*v).or_default();
            *e += p.clone();
        }
        LieOperator::from_images(images)
    }
}

/// `X1..X4` and their coefficient parts `D1..D4`.
#[derive(Debug, Clone)]
pub struct Operators {
    pub x: [LieOperator; 4],
    pub d: [LieOperator; 4],
}

/// Elementary matrices in the order matching `x d/dx`, `y d/dx`, `x d/dy`, `y d/dy`.
const ELEMENTARY: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// Coefficient derivation induced by the substitution family `I + eps E`.
///
/// To first order the transformed field is `F + eps (E F - J_F E (x, y))`; each
/// slot's derivative is read back from that correction in the layout.
fn coefficient_derivation(spec: &SystemSpec, e: (usize, usize)) -> LieOperator {
    let vf = spec.vector_field();
    let comps = [vf.p.clone(), vf.q.clone()];
    let phase = [Poly::x(), Poly::y()];
    let vars = [VarId::X, VarId::Y];
    let mut corr = [Poly::zero(), Poly::zero()];
    // E F: row e.0 receives component e.1
    corr[e.0] += comps[e.1].clone();
    // J_F E (x, y): E (x, y) has phase[e.1] in slot e.0
    for (i, c) in corr.iter_mut().enumerate() {
        *c -= &comps[i].derivative(vars[e.0]) * &phase[e.1];
    }
    let coeffs = [corr[0].phase_coefficients(), corr[1].phase_coefficients()];
    let mut images = Vec::new();
    for (idx, slot) in spec.slots().iter().enumerate() {
        let side = (slot.side == Side::Q) as usize;
        let key = (slot.component_degree - slot.position, slot.position);
        if let Some(c) = coeffs[side].get(&key) {
            images.push((VarId::coeff(idx as u32), c.scale(&(Rational::one() / int(slot.prefactor as i64)))));
        }
    }
    LieOperator::from_images(images)
}

pub fn operators(spec: &SystemSpec) -> Result<Operators, LieError> {
    if let Some((slot, _)) = spec
        .slots()
        .iter()
        .zip(spec.values())
        .find(|(_, v)| **v != crate::system::CoeffValue::Symbolic)
    {
        return Err(LieError::ConcreteCoefficient(slot.display_name.clone()));
    }
    let phase = [Poly::x(), Poly::y()];
    let vars = [VarId::X, VarId::Y];
    let d: [LieOperator; 4] = ELEMENTARY.map(|e| coefficient_derivation(spec, e));
    let x: [LieOperator; 4] = std::array::from_fn(|i| {
        let (r, c) = ELEMENTARY[i];
        // phase part: (E (x, y))_r d/d(var_r) = phase[c] d/d(vars[r])
        d[i].add(&LieOperator::from_images([(vars[r], phase[c].clone())]))
    });
    Ok(Operators { x, d })
}

/// Coefficient-symbol groups used for types: one block per signature degree.
pub fn type_groups(spec: &SystemSpec) -> Vec<Vec<VarId>> {
    let mut groups = vec![vec![VarId::X, VarId::Y]];
    groups.extend(spec.blocks());
    groups
}

pub fn type_of(p: &Poly, spec: &SystemSpec) -> Result<ComitantType, LieError> {
    let symbols = spec.symbols();
    match p.multidegree(&type_groups(spec)) {
        Ok(degs) => Ok(ComitantType { delta: degs[0], d: degs[1..].to_vec() }),
        Err(e) => Err(LieError::Inhomogeneous {
            group: e.group,
            first: Poly::term(Rational::one(), e.witness.0).to_text(symbols),
            second: Poly::term(Rational::one(), e.witness.1).to_text(symbols),
        }),
    }
}

/// `g` with `2g = sum d_i (m_i - 1) - delta`, or `None` when that is odd.
pub fn weight_of(t: &ComitantType, signature: &Signature) -> Option<i64> {
    let twice: i64 = t
        .d
        .iter()
        .zip(signature.degrees())
        .map(|(&d, &m)| d as i64 * (m as i64 - 1))
        .sum::<i64>()
        - t.delta as i64;
    (twice % 2 == 0).then_some(twice / 2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComitantVerdict {
    Comitant { ctype: ComitantType, weight: i64 },
    NotComitant { ctype: ComitantType, weight: Option<i64>, operator: usize, residual: Poly },
}

impl ComitantVerdict {
    pub fn is_comitant(&self) -> bool {
        matches!(self, ComitantVerdict::Comitant { .. })
    }
}

/// Checks `X1(p) = X4(p) = -g p` and `X2(p) = X3(p) = 0`.
pub fn is_comitant(p: &Poly, spec: &SystemSpec, ops: &Operators) -> Result<ComitantVerdict, LieError> {
    let ctype = type_of(p, spec)?;
    let weight = weight_of(&ctype, spec.signature());
    for i in [1, 2] {
        let residual = ops.x[i].apply(p);
        if !residual.is_zero() {
            return Ok(ComitantVerdict::NotComitant { ctype, weight, operator: i + 1, residual });
        }
    }
    let Some(weight) = weight else {
        return Ok(ComitantVerdict::NotComitant { ctype, weight: None, operator: 0, residual: p.clone() });
    };
    let scaled = p.scale(&int(-weight));
    for i in [0, 3] {
        let residual = &ops.x[i].apply(p) - &scaled;
        if !residual.is_zero() {
            return Ok(ComitantVerdict::NotComitant { ctype, weight: Some(weight), operator: i + 1, residual });
        }
    }
    Ok(ComitantVerdict::Comitant { ctype, weight })
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

/// `k = sum_j (-1)^j / j! D3^j(S) x^(delta-j) y^j`.
pub fn reconstruct_from_semi_invariant(s: &Poly, delta: u32, ops: &Operators) -> Result<Poly, LieError> {
    if s.variables().iter().any(|v| v.is_phase()) {
        return Err(LieError::PhaseDependent);
    }
    let d3 = &ops.d[2];
    let mut out = Poly::zero();
    let mut cur = s.clone();
    for j in 0..=delta {
        let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
        let mono = &Poly::x().pow(delta - j) * &Poly::y().pow(j);
        out += (&cur * &mono).scale(&(sign / factorial(j)));
        cur = d3.apply(&cur);
    }
    if !cur.is_zero() {
        return Err(LieError::NotLeadingSemiInvariant { order: delta + 1, residual: format!("{} terms", cur.len()) });
    }
    Ok(out)
}

/// Semi-invariant of a comitant: its `x^delta` coefficient.
pub fn leading_semi_invariant(k: &Poly, delta: u32) -> Poly {
    k.phase_coefficients().remove(&(delta, 0)).unwrap_or_default()
}

/// Diagonal eigenvalues of `D1`, `D4` on each coefficient symbol.
pub fn torus_weights(ops: &Operators) -> HashMap<VarId, (i64, i64)> {
    let mut out = HashMap::new();
    let mut vars: Vec<VarId> = ops.d[0].images().keys().chain(ops.d[3].images().keys()).copied().collect();
    vars.sort();
    vars.dedup();
    for v in vars {
        let eig = |op: &LieOperator| -> i64 {
            let img = op.image(v);
            if img.is_zero() {
                return 0;
            }
            let c = img.coefficient(&Monomial::var(v, 1));
            debug_assert_eq!(img, Poly::var(v).scale(&c), "torus operator not diagonal");
            c.to_integer().to_i64().unwrap_or(0)
        };
        out.insert(v, (eig(&ops.d[0]), eig(&ops.d[3])));
    }
    out
}

fn torus_weight_of(m: &Monomial, weights: &HashMap<VarId, (i64, i64)>) -> (i64, i64) {
    m.iter().fold((0, 0), |acc, (v, e)| {
        let w = weights.get(&v).copied().unwrap_or((0, 0));
        (acc.0 + w.0 * e as i64, acc.1 + w.1 * e as i64)
    })
}

/// Isobarity pair of a coefficient polynomial: the negated `(D1, D4)` eigenvalues.
pub fn isobarity_of(p: &Poly, spec: &SystemSpec, ops: &Operators) -> Result<(i64, i64), LieError> {
    if p.variables().iter().any(|v| v.is_phase()) {
        return Err(LieError::PhaseDependent);
    }
    let weights = torus_weights(ops);
    let mut first: Option<(&Monomial, (i64, i64))> = None;
    for (m, _) in p.iter() {
        let w = torus_weight_of(m, &weights);
        match first {
            None => first = Some((m, w)),
            Some((m0, w0)) if w0 != w => {
                let show = |m: &Monomial| Poly::term(Rational::one(), m.clone()).to_text(spec.symbols());
                return Err(LieError::NotIsobaric {
                    first: show(m0),
                    second: show(m),
                    w_first: (-w0.0, -w0.1),
                    w_second: (-w.0, -w.1),
                });
            }
            _ => {}
        }
    }
    let w = first.map_or((0, 0), |f| f.1);
    Ok((-w.0, -w.1))
}

/// Scale factors `alpha^(-w1) beta^(-w2)` applied to each coefficient by the
/// torus element `diag(alpha, beta)`; used to probe isobarity at points.
pub fn torus_scaling(ops: &Operators, alpha: &Rational, beta: &Rational) -> HashMap<VarId, Rational> {
    torus_weights(ops)
        .into_iter()
        .map(|(v, (a, b))| (v, rpow(alpha, a) * rpow(beta, b)))
        .collect()
}

pub(crate) fn rpow(r: &Rational, e: i64) -> Rational {
    let p = num_traits::pow(r.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        Rational::one() / p
    } else {
        p
    }
}

/// Rank of the Jacobian of `polys` at seeded random rational points, maximised
/// over `trials`; a lower bound for the transcendence degree that is exact with
/// probability one.
pub fn independence_rank(polys: &[Poly], trials: usize, seed: u64) -> Result<usize, LieError> {
    if polys.is_empty() {
        return Err(LieError::Empty);
    }
    let mut vars: Vec<VarId> = polys.iter().flat_map(Poly::variables).collect();
    vars.sort();
    vars.dedup();
    let jac: Vec<Vec<Poly>> = polys.iter().map(|p| vars.iter().map(|v| p.derivative(*v)).collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let point: HashMap<VarId, Rational> =
            vars.iter().map(|v| (*v, rat(rng.gen_range(-97..=97), rng.gen_range(1..=13)))).collect();
        let rows = jac
            .iter()
            .map(|row| row.iter().map(|p| p.eval(&point).unwrap_or_else(Rational::zero)).collect())
            .collect();
        best = best.max(RatMatrix::from_rows(rows).rank());
        if best == polys.len().min(vars.len()) {
            break;
        }
    }
    Ok(best)
}

/// Expresses `op` in the basis `X1..X4` when it lies in their span. The
/// coefficients are read off the images of `x` and `y`, then confirmed on every
/// variable.
pub fn decompose(op: &LieOperator, ops: &Operators) -> Option<[Rational; 4]> {
    let px = op.image(VarId::X).phase_coefficients();
    let py = op.image(VarId::Y).phase_coefficients();
    let read = |m: &BTreeMap<(u32, u32), Poly>, key| m.get(&key).and_then(Poly::constant_value).unwrap_or_default();
    let alpha = [read(&px, (1, 0)), read(&px, (0, 1)), read(&py, (1, 0)), read(&py, (0, 1))];
    let mut combo = LieOperator::default();
    for (a, x) in alpha.iter().zip(&ops.x) {
        combo = combo.add(&x.scale(a));
    }
    (combo == *op).then_some(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s12() -> (SystemSpec, Operators) {
        let spec = SystemSpec::build_generic(Signature::s12());
        let ops = operators(&spec).unwrap();
        (spec, ops)
    }

    #[test]
    fn linear_block_derivations() {
        let (spec, ops) = s12();
        let v = |n: &str| spec.slot_id(n).unwrap();
        let p = |t: &str| spec.parse_poly(t).unwrap();
        assert_eq!(ops.d[0].image(v("d")), p("d"));
        assert_eq!(ops.d[0].image(v("e")), p("-e"));
        assert!(ops.d[0].image(v("c")).is_zero());
        assert_eq!(ops.d[2].image(v("c")), p("-d"));
        assert!(ops.d[2].image(v("d")).is_zero());
        assert_eq!(ops.d[2].image(v("e")), p("c - f"));
        assert_eq!(ops.d[2].image(v("f")), p("d"));
    }

    #[test]
    fn k2_reconstruction_and_invariance() {
        let (spec, ops) = s12();
        let k2 = spec.linear_generators().unwrap().k2;
        let s = spec.parse_poly("-e").unwrap();
        assert_eq!(reconstruct_from_semi_invariant(&s, 2, &ops).unwrap(), k2);
        assert!(ops.x[2].apply(&k2).is_zero());
        let verdict = is_comitant(&k2, &spec, &ops).unwrap();
        assert_eq!(verdict, ComitantVerdict::Comitant { ctype: ComitantType::new(2, vec![1, 0]), weight: -1 });
    }

    #[test]
    fn bracket_closure() {
        let (_, ops) = s12();
        for i in 0..4 {
            for j in 0..4 {
                let b = ops.x[i].bracket(&ops.x[j]);
                assert!(decompose(&b, &ops).is_some(), "[X{}, X{}] leaves the span", i + 1, j + 1);
            }
        }
        assert_eq!(ops.x[0].bracket(&ops.x[3]), LieOperator::default());
        let c = decompose(&ops.x[1].bracket(&ops.x[2]), &ops).unwrap();
        assert!(c[1].is_zero() && c[2].is_zero());
    }

    #[test]
    fn weights() {
        let sig = Signature::s12();
        assert_eq!(weight_of(&ComitantType::new(4, vec![8, 2]), &sig), Some(-1));
        assert_eq!(weight_of(&ComitantType::new(6, vec![20, 4]), &sig), Some(-1));
        assert_eq!(weight_of(&ComitantType::new(0, vec![0, 0]), &sig), Some(0));
        assert_eq!(weight_of(&ComitantType::new(1, vec![0, 0]), &sig), None);
    }

    #[test]
    fn phase_variable_is_not_a_comitant() {
        let (spec, ops) = s12();
        match is_comitant(&Poly::x(), &spec, &ops).unwrap() {
            ComitantVerdict::NotComitant { operator, residual, .. } => {
                assert_eq!(operator, 2);
                assert_eq!(residual, Poly::y());
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn isobarity_detects_mixed_weights() {
        let (spec, ops) = s12();
        assert!(isobarity_of(&spec.parse_poly("c").unwrap(), &spec, &ops).is_ok());
        assert!(matches!(
            isobarity_of(&spec.parse_poly("c + g").unwrap(), &spec, &ops),
            Err(LieError::NotIsobaric { .. })
        ));
    }

    #[test]
    fn jacobian_rank() {
        let (spec, _) = s12();
        let p = |t: &str| spec.parse_poly(t).unwrap();
        assert_eq!(independence_rank(&[p("c"), p("f"), p("c + f")], 3, 1).unwrap(), 2);
        assert!(independence_rank(&[], 1, 1).is_err());
    }

    #[test]
    fn concrete_specs_are_rejected() {
        let spec = SystemSpec::build_generic(Signature::s12()).restrict_to_variety().unwrap();
        assert!(matches!(operators(&spec), Err(LieError::ConcreteCoefficient(_))));
    }
}
