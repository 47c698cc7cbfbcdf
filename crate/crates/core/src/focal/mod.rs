//! Focal quantities on the center-focus variety and generalized focal
//! pseudo-quantities off it.
//!
//! Both come from matching `dU/dt` along the system against powers of the
//! quadratic comitant `k2`, with `U = k2 + F_3 + F_4 + ...` and
//! `F_r = sum_j C(r, j) u_{r,j} x^(r-j) y^j`.

mod probes;
mod pseudo;

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use thiserror::Error;

use crate::lie::{self, ComitantType, LieError};
use crate::linalg::{LinalgError, RatMatrix};
use crate::poly::{int, Poly, Rational, VarId};
use crate::system::{binomial, Signature, SystemError, SystemSpec};

pub use probes::{
    exact_log, f4_comitant, graded_types_by_probe, isobarity_by_probe, random_point, restrict_check,
    particular_chain_check, scaled_point, ChainReport, F4Report, RestrictReport,
};
pub use pseudo::{solve_point_matrix, PointSolution, PseudoQuantitySolution, PseudoSystem, Unknown};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FocalError {
    #[error("the system must be restricted to the center-focus variety")]
    NotOnVariety,
    #[error("unsupported signature {0}")]
    UnsupportedSignature(String),
    #[error("order must be at least 1")]
    InvalidOrder,
    #[error("degree {degree} matching system is singular")]
    Inconsistent { degree: u32 },
    #[error("sigma vanishes at the chosen point")]
    DegenerateSigma,
    #[error("invalid free parameter `{0}`")]
    BadFreeChoice(String),
    #[error("nonlinear coefficients must be rational or symbolic; linear part must be concrete")]
    SymbolicLinearPart,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Name of the ansatz unknown `u_{r,j}`: `a0..a3`, `b0..b4`, ..., `f0..f8`, then `u9_0`, ...
pub fn unknown_name(r: u32, j: u32) -> String {
    if (3..=8).contains(&r) {
        format!("{}{}", (b'a' + (r - 3) as u8) as char, j)
    } else {
        format!("u{r}_{j}")
    }
}

fn parse_unknown_name(name: &str) -> Option<(u32, u32)> {
    let name = name.trim();
    if let Some(rest) = name.strip_prefix('u') {
        let (r, j) = rest.split_once('_')?;
        return Some((r.parse().ok()?, j.parse().ok()?));
    }
    let mut chars = name.chars();
    let letter = chars.next()?;
    if !('a'..='f').contains(&letter) {
        return None;
    }
    let j: u32 = chars.as_str().parse().ok()?;
    Some((letter as u32 - 'a' as u32 + 3, j))
}

/// `C(r, j) x^(r-j) y^j`.
pub fn basis_poly(r: u32, j: u32) -> Poly {
    (&Poly::x().pow(r - j) * &Poly::y().pow(j)).scale(&int(binomial(r, j) as i64))
}

/// Coefficients of `x^(r-i) y^i`, `i = 0..=r`, of the degree-`r` part of `p`.
pub fn phase_vector(p: &Poly, r: u32) -> Vec<Poly> {
    let coeffs = p.phase_coefficients();
    (0..=r).map(|i| coeffs.get(&(r - i, i)).cloned().unwrap_or_default()).collect()
}

/// Position fixed to zero in `F_{2m}`: the largest even position not above `m`.
/// Odd positions are singular on the variety because `(x^2 + y^2)^m` has no
/// term there.
pub fn default_free_position(r: u32) -> u32 {
    let m = r / 2;
    m - m % 2
}

/// One normalized ansatz coefficient per even degree `4, 6, ..., 2K + 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeChoice {
    pub positions: Vec<(u32, u32)>,
}

impl FreeChoice {
    pub fn default_for(k: u32) -> FreeChoice {
        FreeChoice { positions: (1..=k).map(|i| (2 * i + 2, default_free_position(2 * i + 2))).collect() }
    }

    /// Parses names such as `b2,d3`; degrees not mentioned keep the default.
    pub fn parse(text: &str, k: u32) -> Result<FreeChoice, FocalError> {
        let mut choice = FreeChoice::default_for(k);
        for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (r, j) = parse_unknown_name(name).ok_or_else(|| FocalError::BadFreeChoice(name.into()))?;
            if r % 2 != 0 || r < 4 || r > 2 * k + 2 || j > r {
                return Err(FocalError::BadFreeChoice(name.into()));
            }
            choice.positions[(r / 2 - 2) as usize] = (r, j);
        }
        Ok(choice)
    }

    pub fn with(mut self, r: u32, j: u32) -> FreeChoice {
        self.positions[(r / 2 - 2) as usize] = (r, j);
        self
    }

    pub fn names(&self) -> Vec<String> {
        self.positions.iter().map(|&(r, j)| unknown_name(r, j)).collect()
    }

    pub fn position(&self, r: u32) -> Option<u32> {
        self.positions.iter().find(|p| p.0 == r).map(|p| p.1)
    }
}

/// `L_1..L_K` on the variety together with the solved ansatz.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FocalSequence {
    pub l: Vec<Poly>,
    pub f: Vec<Poly>,
    pub kernel_dims: Vec<(u32, usize)>,
    pub convention_note: String,
}

fn check_signature(sig: &Signature) -> Result<(), FocalError> {
    if sig.degrees()[0] != 1 {
        return Err(FocalError::UnsupportedSignature(sig.to_string()));
    }
    Ok(())
}

/// Linear part of the field as rationals `(P1, Q1)`.
fn linear_part(spec: &SystemSpec) -> Result<(Poly, Poly), FocalError> {
    let (p1, q1) = spec.component(1);
    if p1.variables().iter().chain(q1.variables().iter()).any(|v| !v.is_phase()) {
        return Err(FocalError::SymbolicLinearPart);
    }
    Ok((p1, q1))
}

fn apply_field(p: &Poly, q: &Poly, u: &Poly) -> Poly {
    &(p * &u.derivative(VarId::X)) + &(q * &u.derivative(VarId::Y))
}

/// Action of the linear part on the degree-`r` ansatz: column `j` holds the
/// image of `basis_poly(r, j)`.
fn linear_block(p1: &Poly, q1: &Poly, r: u32) -> RatMatrix {
    let mut m = RatMatrix::zeros((r + 1) as usize, (r + 1) as usize);
    for j in 0..=r {
        let img = apply_field(p1, q1, &basis_poly(r, j));
        for (i, c) in phase_vector(&img, r).into_iter().enumerate() {
            m.set(i, j as usize, c.constant_value().unwrap_or_default());
        }
    }
    m
}

/// Focal quantities `L_1..L_K` by degree-by-degree matching of
/// `dU/dt = sum L_k (x^2 + y^2)^(k+1)`.
///
/// Odd degrees determine `F_r` uniquely. At degree `2m + 2` the linear block
/// has a one-dimensional kernel; the coefficient at [`default_free_position`] is
/// fixed to zero and `L_m` is the unique consistency value.
pub fn focal_quantities(spec: &SystemSpec, k_max: u32) -> Result<FocalSequence, FocalError> {
    focal_quantities_with(spec, k_max, &FreeChoice::default_for(k_max))
}

pub fn focal_quantities_with(spec: &SystemSpec, k_max: u32, free: &FreeChoice) -> Result<FocalSequence, FocalError> {
    if k_max < 1 {
        return Err(FocalError::InvalidOrder);
    }
    check_signature(spec.signature())?;
    if !spec.is_on_variety() {
        return Err(FocalError::NotOnVariety);
    }
    let (p1, q1) = linear_part(spec)?;
    let nonlinear: Vec<(u32, Poly, Poly)> = spec
        .signature()
        .nonlinear_degrees()
        .map(|d| {
            let (p, q) = spec.component(d);
            (d, p, q)
        })
        .collect();
    let top = 2 * k_max + 2;
    let k2 = &Poly::x().pow(2) + &Poly::y().pow(2);
    let mut pending: BTreeMap<u32, Poly> = BTreeMap::new();
    let push = |s: u32, fs: &Poly, pending: &mut BTreeMap<u32, Poly>| {
        for (d, p, q) in &nonlinear {
            let r = s + d - 1;
            if r <= top {
                *pending.entry(r).or_default() += apply_field(p, q, fs);
            }
        }
    };
    push(2, &k2, &mut pending);
    let mut l = Vec::new();
    let mut f = Vec::new();
    let mut kernel_dims = Vec::new();
    for r in 3..=top {
        let block = linear_block(&p1, &q1, r);
        kernel_dims.push((r, block.nullity()));
        let rhs: Vec<Poly> = phase_vector(&pending.remove(&r).unwrap_or_default(), r).into_iter().map(|p| -p).collect();
        let (cols, l_col): (Vec<usize>, bool) = if r % 2 == 0 {
            let fixed = free.position(r).unwrap_or_else(|| default_free_position(r)) as usize;
            ((0..=r as usize).filter(|&j| j != fixed).collect(), true)
        } else {
            ((0..=r as usize).collect(), false)
        };
        let mut sq = block.select_columns(&cols);
        if l_col {
            let w = phase_vector(&k2.pow(r / 2), r);
            let mut big = RatMatrix::zeros(sq.rows, sq.cols + 1);
            for i in 0..sq.rows {
                for j in 0..sq.cols {
                    big.set(i, j, sq.get(i, j).clone());
                }
                big.set(i, sq.cols, -w[i].constant_value().unwrap_or_default());
            }
            sq = big;
        }
        let inv = sq.inverse().ok_or(FocalError::Inconsistent { degree: r })?;
        let sol: Vec<Poly> = (0..inv.rows)
            .map(|i| {
                let mut acc = Poly::zero();
                for (j, b) in rhs.iter().enumerate() {
                    let c = inv.get(i, j);
                    if !c.is_zero() && !b.is_zero() {
                        acc += b.scale(c);
                    }
                }
                acc
            })
            .collect();
        let mut fr = Poly::zero();
        for (idx, &j) in cols.iter().enumerate() {
            fr += &sol[idx] * &basis_poly(r, j as u32);
        }
        if l_col {
            l.push(sol[cols.len()].clone());
        }
        push(r, &fr, &mut pending);
        f.push(fr);
    }
    Ok(FocalSequence {
        l,
        f,
        kernel_dims,
        convention_note: format!(
            "dU/dt = sum L_k (x^2+y^2)^(k+1); fixed ansatz coefficients {}",
            free.names().join(",")
        ),
    })
}

/// Sizes and types of the `k`-th pseudo-quantity system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub k: u32,
    pub m: usize,
    pub n: usize,
    pub total_degree: u32,
    pub types: Vec<ComitantType>,
}

/// Closed forms: `m = k(2k+7)`, `n = m + k`, `N = (5k^2+13k+2)/2` and the comitant
/// type `(2(k+1), (5k^2+9k+2)/2, 2k)`; for `s(1,2,3)` the graded family
/// `(2(k+1), (5k^2+9k+2)/2 + i, 2(k-i), i)`, `i = 0..k`.
pub fn structure(signature: &Signature, k: u32) -> Result<StructureReport, FocalError> {
    if k < 1 {
        return Err(FocalError::InvalidOrder);
    }
    let m = (k * (2 * k + 7)) as usize;
    let d1 = (5 * k * k + 9 * k + 2) / 2;
    let total_degree = (5 * k * k + 13 * k + 2) / 2;
    let types = match signature.degrees() {
        [1, 2] => vec![ComitantType::new(2 * (k + 1), vec![d1, 2 * k])],
        [1, 2, 3] => (0..=k).map(|i| ComitantType::new(2 * (k + 1), vec![d1 + i, 2 * (k - i), i])).collect(),
        _ => return Err(FocalError::UnsupportedSignature(signature.to_string())),
    };
    Ok(StructureReport { k, m, n: m + k as usize, total_degree, types })
}

/// Splits `p` into parts homogeneous in the phase variables and in each
/// coefficient block; keys are `(delta, d_0, ..., d_l)`.
pub fn grade_split(p: &Poly, spec: &SystemSpec) -> BTreeMap<ComitantType, Poly> {
    p.split_by_groups(&lie::type_groups(spec))
        .into_iter()
        .map(|(k, v)| (ComitantType::new(k[0], k[1..].to_vec()), v))
        .collect()
}

/// `G0 = i1 = c + f`: the common factor of the degree-two matching equations.
pub fn null_pseudo_quantity(spec: &SystemSpec) -> Result<Poly, FocalError> {
    let i1 = spec.linear_generators()?.i1;
    let sys = PseudoSystem::build(spec, 1)?;
    for eq in &sys.degree_two {
        if !i1.is_zero() && eq.divide_exact(&i1).is_err() {
            return Err(FocalError::Inconsistent { degree: 2 });
        }
    }
    Ok(i1)
}

/// Values of every coefficient of `spec` after applying `assignment`.
pub fn full_assignment(spec: &SystemSpec, extra: &HashMap<VarId, Rational>) -> HashMap<VarId, Rational> {
    let mut out = spec.assignment();
    out.extend(extra.iter().map(|(k, v)| (*k, v.clone())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn variety() -> SystemSpec {
        SystemSpec::build_generic(Signature::s12()).restrict_to_variety().unwrap()
    }

    #[test]
    fn first_focal_quantity() {
        let spec = variety();
        let seq = focal_quantities(&spec, 1).unwrap();
        let expect = spec.parse_poly("1/2*g*l - 1/2*g*h - 1/2*k*h - 1/2*k*n + 1/2*m*l + 1/2*m*n").unwrap();
        assert_eq!(seq.l[0], expect);
    }

    #[test]
    fn kernel_dimensions() {
        let seq = focal_quantities(&variety(), 3).unwrap();
        for (r, dim) in seq.kernel_dims {
            assert_eq!(dim, if r % 2 == 0 { 1 } else { 0 }, "degree {r}");
        }
    }

    #[test]
    fn linear_center_has_no_focal_values() {
        let spec = SystemSpec::parse_shorthand("s(1,2); V; g=0").unwrap();
        let seq = focal_quantities(&spec, 3).unwrap();
        assert!(seq.l.iter().all(Poly::is_zero));
    }

    #[test]
    fn names_and_free_choice() {
        assert_eq!(unknown_name(4, 2), "b2");
        assert_eq!(unknown_name(9, 3), "u9_3");
        assert_eq!(parse_unknown_name("d3"), Some((6, 3)));
        assert_eq!(parse_unknown_name("u10_4"), Some((10, 4)));
        assert_eq!(FreeChoice::default_for(4).names(), ["b2", "d2", "f4", "u10_4"]);
        assert_eq!(FreeChoice::parse("d3", 2).unwrap().names(), ["b2", "d3"]);
        assert!(FreeChoice::parse("c1", 2).is_err());
        assert!(FreeChoice::parse("f0", 2).is_err());
    }

    #[test]
    fn structure_formulas() {
        let s = structure(&Signature::s12(), 1).unwrap();
        assert_eq!((s.m, s.n, s.total_degree), (9, 10, 10));
        assert_eq!(s.types, vec![ComitantType::new(4, vec![8, 2])]);
        assert_eq!(structure(&Signature::s12(), 3).unwrap().types, vec![ComitantType::new(8, vec![37, 6])]);
        let t = structure(&Signature::s123(), 2).unwrap().types;
        assert_eq!(
            t,
            vec![
                ComitantType::new(6, vec![20, 4, 0]),
                ComitantType::new(6, vec![21, 2, 1]),
                ComitantType::new(6, vec![22, 0, 2])
            ]
        );
        assert!(structure(&Signature::parse("1,3").unwrap(), 1).is_err());
    }

    #[test]
    fn null_pseudo_quantity_is_trace() {
        let spec = SystemSpec::build_generic(Signature::s12());
        assert_eq!(null_pseudo_quantity(&spec).unwrap(), spec.parse_poly("c + f").unwrap());
    }

    #[test]
    fn grade_split_of_homogeneous_poly() {
        let spec = SystemSpec::build_generic(Signature::s12());
        let p = spec.parse_poly("c*g + d*h").unwrap();
        let parts = grade_split(&p, &spec);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts.values().next().unwrap(), &p);
    }
}
