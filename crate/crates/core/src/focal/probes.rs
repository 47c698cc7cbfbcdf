//! Point-evaluation probes: block scaling for degrees, torus scaling for
//! isobarity, and the restriction of pseudo-quantities to the variety.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::pseudo::PseudoSystem;
use super::{focal_quantities_with, FocalError, FreeChoice};
use crate::lie::{self, rpow, ComitantType, ComitantVerdict, Operators};
use crate::linalg::{Deadline, RatMatrix};
use crate::poly::{int, rat, Poly, Rational, VarId};
use crate::system::{CoeffValue, SystemSpec};

/// Random rational values for every symbolic slot of `spec`; concrete slots keep
/// their values.
pub fn random_point(spec: &SystemSpec, rng: &mut ChaCha8Rng) -> HashMap<VarId, Rational> {
    let mut out = spec.assignment();
    for (i, v) in spec.values().iter().enumerate() {
        if *v == CoeffValue::Symbolic {
            let num = rng.gen_range(-40..=40);
            let den = rng.gen_range(1..=9);
            out.insert(VarId::coeff(i as u32), rat(if num == 0 { 1 } else { num }, den));
        }
    }
    out
}

/// Multiplies the values of block `b` (signature order) by `factors[b]`.
pub fn scaled_point(spec: &SystemSpec, point: &HashMap<VarId, Rational>, factors: &[Rational]) -> HashMap<VarId, Rational> {
    let mut out = point.clone();
    for (block, f) in spec.blocks().iter().zip(factors) {
        for v in block {
            if let Some(val) = out.get_mut(v) {
                *val = &*val * f;
            }
        }
    }
    out
}

/// The integer `e` with `base^e = value`, if any (`base > 1`).
pub fn exact_log(base: &Rational, value: &Rational) -> Option<i64> {
    if !value.is_positive() || *base <= Rational::one() {
        return None;
    }
    let (mut v, sign) = if *value >= Rational::one() { (value.clone(), 1) } else { (Rational::one() / value, -1) };
    let mut e = 0i64;
    while v > Rational::one() {
        v = v / base;
        e += 1;
        if e > 10_000 {
            return None;
        }
    }
    (v == Rational::one()).then_some(sign * e)
}

/// Coefficients of the polynomial through `(nodes[i], values[i])`, lowest degree first.
fn interpolate(nodes: &[Rational], values: &[Rational]) -> Option<Vec<Rational>> {
    let n = nodes.len();
    let rows = nodes
        .iter()
        .map(|t| {
            let mut row = Vec::with_capacity(n);
            let mut p = Rational::one();
            for _ in 0..n {
                row.push(p.clone());
                p = &p * t;
            }
            row
        })
        .collect();
    RatMatrix::from_rows(rows).solve(values)
}

/// Multi-degree of the numerator core measured at points: the core is split by
/// its degree in the last coefficient block through exact interpolation, and
/// each part's degree in every other block is read off by scaling that block
/// by 2. Every part is then confirmed at an unrelated scaling.
pub fn graded_types_by_probe(
    spec: &SystemSpec,
    sys: &PseudoSystem,
    free: &FreeChoice,
    seed: u64,
) -> Result<Vec<ComitantType>, FocalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = random_point(spec, &mut rng);
    let nb = spec.blocks().len();
    let last = nb - 1;
    // each determinant term is a product of one entry per row, and every entry
    // has degree at most one in the nonlinear coefficients
    let bound = sys.m();
    let nodes: Vec<Rational> = (0..=bound as i64).map(int).collect();
    let profile = |factors: &[Rational]| -> Result<Vec<Rational>, FocalError> {
        let mut values = Vec::with_capacity(nodes.len());
        for t in &nodes {
            let mut f = factors.to_vec();
            f[last] = &f[last] * t;
            values.push(sys.numerator_at(free, &scaled_point(spec, &base, &f))?);
        }
        interpolate(&nodes, &values).ok_or(FocalError::Inconsistent { degree: 0 })
    };
    let ones = vec![Rational::one(); nb];
    let reference = profile(&ones)?;
    let mut exps: Vec<Vec<i64>> = Vec::new();
    let parts: Vec<usize> = (0..reference.len()).filter(|&i| !reference[i].is_zero()).collect();
    let mut per_block: Vec<Vec<Rational>> = Vec::new();
    for b in 0..last {
        let mut f = ones.clone();
        f[b] = int(2);
        per_block.push(profile(&f)?);
    }
    for &i in &parts {
        let mut e = Vec::with_capacity(nb);
        for prof in &per_block {
            let ratio = &prof[i] / &reference[i];
            e.push(exact_log(&int(2), &ratio).ok_or(FocalError::Inconsistent { degree: 0 })?);
        }
        e.push(i as i64);
        exps.push(e);
    }
    // confirmation at an unrelated scaling
    let check: Vec<Rational> = (0..nb).map(|b| rat(3 + 2 * b as i64, 2 + b as i64)).collect();
    let got = sys.numerator_at(free, &scaled_point(spec, &base, &check))?;
    let mut predicted = Rational::zero();
    for (&i, e) in parts.iter().zip(&exps) {
        let mut term = reference[i].clone();
        for (b, &ex) in e.iter().enumerate() {
            term *= rpow(&check[b], ex);
        }
        predicted += term;
    }
    if got != predicted {
        return Err(FocalError::Inconsistent { degree: 0 });
    }
    let delta = 2 * (sys.k + 1);
    Ok(exps
        .into_iter()
        .map(|e| ComitantType::new(delta, e.into_iter().map(|x| x as u32).collect()))
        .collect())
}

/// Isobarity of the numerator core at a point: the torus element
/// `diag(alpha, beta)` multiplies it by `alpha^(-w1) beta^(-w2)`.
pub fn isobarity_by_probe(
    spec: &SystemSpec,
    ops: &Operators,
    sys: &PseudoSystem,
    free: &FreeChoice,
    point: &HashMap<VarId, Rational>,
) -> Result<(i64, i64), FocalError> {
    let at = |alpha: i64, beta: i64| -> Result<Rational, FocalError> {
        let scale = lie::torus_scaling(ops, &int(alpha), &int(beta));
        let p: HashMap<VarId, Rational> =
            point.iter().map(|(v, val)| (*v, val * scale.get(v).cloned().unwrap_or_else(Rational::one))).collect();
        sys.numerator_at(free, &p)
    };
    let _ = spec;
    let base = at(1, 1)?;
    if base.is_zero() {
        return Err(FocalError::DegenerateSigma);
    }
    let two = int(2);
    let l1 = exact_log(&two, &(at(2, 1)? / &base)).ok_or(FocalError::Inconsistent { degree: 0 })?;
    let l4 = exact_log(&two, &(at(1, 2)? / &base)).ok_or(FocalError::Inconsistent { degree: 0 })?;
    if at(3, 5)? != &base * rpow(&int(3), l1) * rpow(&int(5), l4) {
        return Err(FocalError::Inconsistent { degree: 0 });
    }
    Ok((-l1, -l4))
}

/// Restriction of `G_k` to the variety compared with the classical `L_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictReport {
    pub k: u32,
    pub free: Vec<String>,
    /// `G_k = L_k` at every point (zero free parameters).
    pub g_equals_l: bool,
    /// `numerator_core / L_k` at each point (`None` where `L_k = 0`).
    pub ratios: Vec<Option<Rational>>,
    /// Common value of the ratios when they agree.
    pub constant: Option<Rational>,
    /// `sigma` at the variety point, where it is constant.
    pub sigma: Option<Rational>,
    pub numerators_vanish: bool,
}

/// Evaluates the pseudo-quantity system at variety points with random
/// nonlinear coefficients.
pub fn restrict_check(
    generic: &SystemSpec,
    k: u32,
    free: &FreeChoice,
    points: usize,
    seed: u64,
) -> Result<RestrictReport, FocalError> {
    let on_v = generic.restrict_to_variety()?;
    let sys = PseudoSystem::build(generic, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios = Vec::new();
    let mut g_equals_l = true;
    let mut sigma = None;
    let mut numerators_vanish = true;
    for _ in 0..points {
        let point = random_point(&on_v, &mut rng);
        let concrete = assign(&on_v, &point);
        let lk = focal_quantities_with(&concrete, k, free)?.l[k as usize - 1]
            .constant_value()
            .unwrap_or_default();
        let (a, c) = sys.evaluate(&point);
        match super::pseudo::solve_point_matrix(&sys, free, &a, &c) {
            Ok(sol) => {
                g_equals_l &= sol.g[k as usize - 1] == lk;
                numerators_vanish &= sol.numerator_core.is_zero();
                sigma = Some(sol.sigma.clone());
                ratios.push((!lk.is_zero()).then(|| &sol.numerator_core / &lk));
            }
            Err(FocalError::DegenerateSigma) => {
                g_equals_l = false;
                sigma = Some(Rational::zero());
                let n = sys.numerator_at(free, &point)?;
                numerators_vanish &= n.is_zero();
                ratios.push((!lk.is_zero()).then(|| &n / &lk));
            }
            Err(e) => return Err(e),
        }
    }
    let first = ratios.iter().flatten().next().cloned();
    let constant = first.filter(|f| ratios.iter().flatten().all(|r| r == f));
    Ok(RestrictReport { k, free: free.names(), g_equals_l, ratios, constant, sigma, numerators_vanish })
}

/// `spec` with every slot fixed to the values in `point`.
pub(crate) fn assign(spec: &SystemSpec, point: &HashMap<VarId, Rational>) -> SystemSpec {
    let values: HashMap<String, Rational> = point
        .iter()
        .map(|(v, r)| (spec.symbols().name(*v).to_string(), r.clone()))
        .collect();
    spec.with_values(&values).expect("point uses the spec's own symbols")
}

/// The weight `-1` quartic comitant assembled from the first pseudo-quantity
/// numerators with zero free parameter.
#[derive(Debug, Clone)]
pub struct F4Report {
    /// Primitive numerators `G_{1,i}` for free parameter `b_i`, `i = 0..4`.
    pub g1: Vec<Poly>,
    /// Companions `B_{1,i}` scaled by the same content as `G_{1,i}`.
    pub b1: Vec<Poly>,
    pub sigma: Vec<Poly>,
    pub contents: Vec<Rational>,
    /// `D3(G_{1,i}) = chain[i] * G_{1,i+1}`; `None` when not proportional.
    pub chain: Vec<Option<Rational>>,
    /// Comitant rebuilt from `G_{1,0}` by the `D3` series.
    pub f4: Poly,
    /// `f4 = sum coefficient_ratios[i] * G_{1,i} x^(4-i) y^i`.
    pub coefficient_ratios: Vec<Option<Rational>>,
    pub verdict: ComitantVerdict,
    /// `f4|V = variety_ratio * L1 (x^2 + y^2)^2`.
    pub variety_ratio: Option<Rational>,
}

fn proportional(a: &Poly, b: &Poly) -> Option<Rational> {
    if b.is_zero() {
        return a.is_zero().then(Rational::zero);
    }
    let (m, c) = b.leading_term()?;
    let r = a.coefficient(m) / c;
    (b.scale(&r) == *a).then_some(r)
}

pub fn f4_comitant(generic: &SystemSpec, ops: &Operators, deadline: Deadline) -> Result<F4Report, FocalError> {
    let sys = PseudoSystem::build(generic, 1)?;
    let (mut g1, mut b1, mut sigma, mut contents) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for i in 0..=4 {
        let sol = sys.solve_symbolic(&FreeChoice::default_for(1).with(4, i), deadline)?;
        let content = sol.numerator_core.content();
        g1.push(sol.numerator_core.scale(&(Rational::one() / &content)));
        b1.push(sol.free_terms[0].1.scale(&(Rational::one() / &content)));
        sigma.push(sol.sigma);
        contents.push(content);
    }
    let d3 = &ops.d[2];
    let chain = (0..4).map(|i| proportional(&d3.apply(&g1[i]), &g1[i + 1])).collect();
    let f4 = lie::reconstruct_from_semi_invariant(&g1[0], 4, ops)?;
    let coeffs = f4.phase_coefficients();
    let coefficient_ratios = (0..=4u32)
        .map(|i| proportional(&coeffs.get(&(4 - i, i)).cloned().unwrap_or_default(), &g1[i as usize]))
        .collect();
    let verdict = lie::is_comitant(&f4, generic, ops)?;
    let on_v = generic.restrict_to_variety()?;
    let f4v = on_v.specialize(&f4);
    let l1 = focal_quantities_with(&on_v, 1, &FreeChoice::default_for(1))?.l[0].clone();
    let circle = (&Poly::x().pow(2) + &Poly::y().pow(2)).pow(2);
    let variety_ratio = proportional(&f4v, &(&l1 * &circle));
    Ok(F4Report { g1, b1, sigma, contents, chain, f4, coefficient_ratios, verdict, variety_ratio })
}

/// Outcome of checking a particular solution `b_0..b_4` of the `D3` chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub zero_solution_holds: bool,
    pub points_checked: usize,
    pub denominators_at_variety: Vec<Rational>,
    /// Per link, whether `D3(E_i) = chain_i E_{i+1}` held at every point.
    pub links: Vec<bool>,
    /// `E_i|V = G_{1,i}|V` at every point.
    pub variety_agrees: bool,
}

/// Printed particular solution: numerators of `b_0..b_4` and their integer
/// prefactors in front of the common denominator.
const PARTICULAR: [(&str, i64); 5] = [
    ("-e*g^2 - 2*e*h*l - e*m^2", 1),
    ("c*g^2 + 2*c*h*l + c*m^2 - f*g^2 - 2*f*h*l - f*m^2 - 2*e*g*h - 2*e*k*l - 2*e*h*m - 2*e*m*n", 4),
    (
        "2*c*g*h + 2*c*k*l + 2*c*h*m + 2*c*m*n - 2*f*g*h - 2*f*k*l - 2*f*h*m - 2*f*m*n - e*h^2 - 2*e*k*m - e*n^2 + d*g^2 + 2*d*h*l + d*m^2",
        6,
    ),
    ("c*h^2 + 2*c*k*m + c*n^2 - f*h^2 - 2*f*k*m - f*n^2 + 2*d*g*h + 2*d*k*l + 2*d*h*m + 2*d*m*n", 4),
    ("d*h^2 + 2*d*k*m + d*n^2", 1),
];
const PARTICULAR_DENOMINATOR: &str = "3*c^2 - 4*d*e + 10*c*f + 3*f^2";

/// Checks that zero free parameters satisfy the `D3` chain, and evaluates the
/// printed particular solution at random points.
pub fn particular_chain_check(
    generic: &SystemSpec,
    ops: &Operators,
    f4: &F4Report,
    points: usize,
    seed: u64,
) -> Result<ChainReport, FocalError> {
    let zero_solution_holds = f4.chain.iter().all(Option::is_some);
    let d3 = &ops.d[2];
    let den = generic.parse_poly(PARTICULAR_DENOMINATOR).map_err(crate::system::SystemError::from)?;
    let nums: Vec<(Poly, Rational)> = PARTICULAR
        .iter()
        .map(|(t, q)| Ok((generic.parse_poly(t).map_err(crate::system::SystemError::from)?, int(*q))))
        .collect::<Result<_, FocalError>>()?;
    let on_v = generic.restrict_to_variety()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut links = vec![true; 4];
    let mut variety_agrees = true;
    let mut denominators_at_variety = Vec::new();
    let mut checked = 0;
    let d3_den = d3.apply(&den);
    while checked < points {
        let point = random_point(generic, &mut rng);
        let dv = den.eval(&point).unwrap();
        if dv.is_zero() {
            continue;
        }
        checked += 1;
        let ev = |p: &Poly| p.eval(&point).unwrap();
        let b: Vec<Rational> = nums.iter().map(|(n, q)| ev(n) / (q * &dv)).collect();
        let db: Vec<Rational> = nums
            .iter()
            .map(|(n, q)| (ev(&d3.apply(n)) * &dv - ev(n) * ev(&d3_den)) / (q * &dv * &dv))
            .collect();
        let e: Vec<Rational> = (0..5).map(|i| ev(&f4.g1[i]) + ev(&f4.b1[i]) * &b[i]).collect();
        for i in 0..4 {
            let lhs = ev(&d3.apply(&f4.g1[i])) + ev(&d3.apply(&f4.b1[i])) * &b[i] + ev(&f4.b1[i]) * &db[i];
            match &f4.chain[i] {
                Some(r) => links[i] &= lhs == r * &e[i + 1],
                None => links[i] = false,
            }
        }
        // the same comparison on the variety
        let vpoint = random_point(&on_v, &mut rng);
        let vev = |p: &Poly| p.eval(&vpoint).unwrap();
        let vd = vev(&den);
        denominators_at_variety.push(vd.clone());
        for i in 0..5 {
            let bv = vev(&nums[i].0) / (&nums[i].1 * &vd);
            variety_agrees &= vev(&f4.g1[i]) + vev(&f4.b1[i]) * bv == vev(&f4.g1[i]);
        }
    }
    Ok(ChainReport { zero_solution_holds, points_checked: checked, denominators_at_variety, links, variety_agrees })
}
