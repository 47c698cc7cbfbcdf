use std::collections::HashMap;

use num_traits::Zero;

use super::{basis_poly, check_signature, phase_vector, unknown_name, FocalError, FreeChoice};
use crate::linalg::{Deadline, PolyMatrix, RatMatrix};
use crate::poly::{Poly, Rational, VarId};
use crate::system::SystemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unknown {
    F { degree: u32, position: u32 },
    G(u32),
}

impl Unknown {
    pub fn name(&self) -> String {
        match *self {
            Unknown::F { degree, position } => unknown_name(degree, position),
            Unknown::G(k) => format!("G{k}"),
        }
    }
}

/// The linear system obtained by splitting `dU/dt = sum G_k k2^(k+1)` along
/// `x^(r-i) y^i` for `3 <= r <= 2K + 2`.
///
/// Rows are ordered by degree, then by the power of `y`; columns are the ansatz
/// coefficients of `F_3, F_4, G_1, F_5, F_6, G_2, ...`.
#[derive(Debug, Clone)]
pub struct PseudoSystem {
    pub k: u32,
    pub rows: Vec<(u32, u32)>,
    pub columns: Vec<Unknown>,
    pub a: PolyMatrix,
    pub c: Vec<Poly>,
    /// Coefficients of `x^2, xy, y^2` of `dk2/dt`; the vanishing of these is
    /// what forces `c + f = 0`.
    pub degree_two: Vec<Poly>,
}

/// Exact result of the symbolic Cramer solution
/// `G_K = (numerator_core + sum free_terms * phi) / sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoQuantitySolution {
    pub k: u32,
    pub m: usize,
    pub n: usize,
    pub numerator_core: Poly,
    pub free_terms: Vec<(String, Poly)>,
    pub sigma: Poly,
    pub chosen_free: Vec<String>,
}

/// The same structure evaluated at a rational coefficient point, together with
/// `G_1..G_K` for zero free parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSolution {
    pub k: u32,
    pub numerator_core: Rational,
    pub free_terms: Vec<(String, Rational)>,
    pub sigma: Rational,
    pub g: Vec<Rational>,
}

pub(crate) fn row_offset(r: u32) -> usize {
    (3..r).map(|s| (s + 1) as usize).sum()
}

impl PseudoSystem {
    pub fn build(spec: &SystemSpec, k: u32) -> Result<PseudoSystem, FocalError> {
        if k < 1 {
            return Err(FocalError::InvalidOrder);
        }
        check_signature(spec.signature())?;
        let top = 2 * k + 2;
        let vf = spec.vector_field();
        let k2 = spec.linear_generators()?.k2;
        let rows: Vec<(u32, u32)> = (3..=top).flat_map(|r| (0..=r).map(move |i| (r, i))).collect();
        let mut columns = Vec::new();
        for r in 3..=top {
            columns.extend((0..=r).map(|j| Unknown::F { degree: r, position: j }));
            if r % 2 == 0 {
                columns.push(Unknown::G(r / 2 - 1));
            }
        }
        let mut a = PolyMatrix::zeros(rows.len(), columns.len());
        let mut k2_powers = vec![k2.clone()];
        for _ in 1..=k {
            let next = k2_powers.last().unwrap() * &k2;
            k2_powers.push(next);
        }
        for (col, unknown) in columns.iter().enumerate() {
            let image = match *unknown {
                Unknown::F { degree, position } => vf.apply(&basis_poly(degree, position)),
                Unknown::G(i) => -&k2_powers[i as usize],
            };
            for ((xe, ye), coeff) in image.phase_coefficients() {
                let r = xe + ye;
                if (3..=top).contains(&r) {
                    a.set(row_offset(r) + ye as usize, col, coeff);
                }
            }
        }
        let dk2 = vf.apply(&k2);
        let mut c = vec![Poly::zero(); rows.len()];
        for ((xe, ye), coeff) in dk2.phase_coefficients() {
            let r = xe + ye;
            if (3..=top).contains(&r) {
                c[row_offset(r) + ye as usize] = -coeff;
            }
        }
        let degree_two = phase_vector(&dk2, 2);
        Ok(PseudoSystem { k, rows, columns, a, c, degree_two })
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    fn column_of(&self, u: Unknown) -> usize {
        self.columns.iter().position(|&c| c == u).expect("unknown column")
    }

    /// Columns kept after fixing the free parameters, and the free columns.
    fn split_columns(&self, free: &FreeChoice) -> Result<(Vec<usize>, Vec<(String, usize)>), FocalError> {
        if free.positions.len() != self.k as usize {
            return Err(FocalError::BadFreeChoice(free.names().join(",")));
        }
        let free_cols: Vec<(String, usize)> = free
            .positions
            .iter()
            .map(|&(r, j)| (unknown_name(r, j), self.column_of(Unknown::F { degree: r, position: j })))
            .collect();
        let kept = (0..self.n()).filter(|c| !free_cols.iter().any(|f| f.1 == *c)).collect();
        Ok((kept, free_cols))
    }

    fn g_index(&self, kept: &[usize]) -> usize {
        let g = self.column_of(Unknown::G(self.k));
        kept.iter().position(|&c| c == g).unwrap()
    }

    /// Cramer solution with polynomial entries, by fraction-free elimination.
    pub fn solve_symbolic(&self, free: &FreeChoice, deadline: Deadline) -> Result<PseudoQuantitySolution, FocalError> {
        let (kept, free_cols) = self.split_columns(free)?;
        let sq = self.a.select_columns(&kept);
        let gi = self.g_index(&kept);
        let sigma = sq.determinant(deadline)?;
        let mut num = sq.clone();
        num.replace_column(gi, &self.c);
        let numerator_core = num.determinant(deadline)?;
        let mut free_terms = Vec::new();
        for (name, col) in &free_cols {
            let neg: Vec<Poly> = (0..self.m()).map(|i| -self.a.get(i, *col)).collect();
            let mut mat = sq.clone();
            mat.replace_column(gi, &neg);
            free_terms.push((name.clone(), mat.determinant(deadline)?));
        }
        Ok(PseudoQuantitySolution {
            k: self.k,
            m: self.m(),
            n: self.n(),
            numerator_core,
            free_terms,
            sigma,
            chosen_free: free.names(),
        })
    }

    /// Matrix and right-hand side evaluated at a full coefficient assignment.
    pub fn evaluate(&self, point: &HashMap<VarId, Rational>) -> (RatMatrix, Vec<Rational>) {
        let ev = |p: &Poly| p.eval(point).expect("point must assign every coefficient");
        (self.a.map_to_rational(ev), self.c.iter().map(ev).collect())
    }

    pub fn solve_point(&self, free: &FreeChoice, point: &HashMap<VarId, Rational>) -> Result<PointSolution, FocalError> {
        let (a, c) = self.evaluate(point);
        solve_point_matrix(self, free, &a, &c)
    }

    /// Numerator core only: one determinant, the workhorse of scaling probes.
    pub fn numerator_at(&self, free: &FreeChoice, point: &HashMap<VarId, Rational>) -> Result<Rational, FocalError> {
        let (kept, _) = self.split_columns(free)?;
        let (a, c) = self.evaluate(point);
        let mut sq = a.select_columns(&kept);
        sq.replace_column(self.g_index(&kept), &c);
        Ok(sq.determinant()?)
    }
}

/// Point solution from an already evaluated system; rows may be permuted by
/// the caller.
pub fn solve_point_matrix(
    sys: &PseudoSystem,
    free: &FreeChoice,
    a: &RatMatrix,
    c: &[Rational],
) -> Result<PointSolution, FocalError> {
    let (kept, free_cols) = sys.split_columns(free)?;
    let sq = a.select_columns(&kept);
    let gi = sys.g_index(&kept);
    let sigma = sq.determinant()?;
    if sigma.is_zero() {
        return Err(FocalError::DegenerateSigma);
    }
    let mut num = sq.clone();
    num.replace_column(gi, c);
    let numerator_core = num.determinant()?;
    let mut free_terms = Vec::new();
    for (name, col) in &free_cols {
        let neg: Vec<Rational> = (0..a.rows).map(|i| -a.get(i, *col)).collect();
        let mut mat = sq.clone();
        mat.replace_column(gi, &neg);
        free_terms.push((name.clone(), mat.determinant()?));
    }
    let sol = sq.solve(c).ok_or(FocalError::DegenerateSigma)?;
    let g = (1..=sys.k)
        .map(|i| {
            let col = sys.column_of(Unknown::G(i));
            sol[kept.iter().position(|&k| k == col).unwrap()].clone()
        })
        .collect();
    Ok(PointSolution { k: sys.k, numerator_core, free_terms, sigma, g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::Signature;

    #[test]
    fn sizes_follow_closed_forms() {
        let spec = SystemSpec::build_generic(Signature::s12());
        for k in 1..=5u32 {
            let sys = PseudoSystem::build(&spec, k).unwrap();
            assert_eq!(sys.m(), (k * (2 * k + 7)) as usize);
            assert_eq!(sys.n(), sys.m() + k as usize);
        }
    }

    #[test]
    fn degree_two_block() {
        let spec = SystemSpec::build_generic(Signature::s12());
        let sys = PseudoSystem::build(&spec, 1).unwrap();
        let p = |t: &str| spec.parse_poly(t).unwrap();
        assert_eq!(sys.degree_two, vec![p("-e*c - e*f"), p("c^2 - f^2"), p("d*c + d*f")]);
    }
}
