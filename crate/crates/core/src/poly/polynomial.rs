use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use super::monomial::Monomial;
use super::var::{Symbols, VarId};
use super::{PolyError, Rational};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by [`Monomial`], so iteration follows the
/// graded reverse-lexicographic order and equal polynomials have identical storage.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

/// Result of a multidegree query when some group is not homogeneous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inhomogeneous {
    pub group: usize,
    pub witness: (Monomial, Monomial),
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: VarId) -> Poly {
        Poly::term(Rational::one(), Monomial::var(v, 1))
    }

    pub fn x() -> Poly {
        Poly::var(VarId::X)
    }

    pub fn y() -> Poly {
        Poly::var(VarId::Y)
    }

    pub fn term(c: Rational, m: Monomial) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Poly {
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Poly::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Monomial, Rational>) -> Poly {
        Poly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms leading-first (descending monomial order).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.coefficient(&Monomial::one()))
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// All variables that occur in the polynomial, in variable order.
    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, c: &Rational, mono: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.mul(mono), k * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, v: VarId) -> Poly {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let (rest, _) = m.without(v);
            let nm = rest.mul(&Monomial::var(v, e - 1));
            out.insert(nm, c * Rational::from_integer(BigInt::from(e)));
        }
        Poly { terms: out }
    }

    /// Simultaneous substitution of polynomials for variables. Unbound variables
    /// pass through unchanged.
    pub fn substitute(&self, bindings: &HashMap<VarId, Poly>) -> Poly {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut powers: HashMap<(VarId, u32), Poly> = HashMap::new();
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut kept: Vec<(VarId, u32)> = Vec::new();
            let mut factor = Poly::constant(c.clone());
            for (v, e) in m.iter() {
                match bindings.get(&v) {
                    Some(p) => {
                        let pw = powers.entry((v, e)).or_insert_with(|| p.pow(e));
                        factor = &factor * &*pw;
                    }
                    None => kept.push((v, e)),
                }
            }
            let keep = Monomial::from_pairs(kept);
            for (fm, fc) in factor.terms {
                *acc.entry(fm.mul(&keep)).or_insert_with(Rational::zero) += fc;
            }
        }
        Poly::from_map(acc)
    }

    /// Partial evaluation at rational values.
    pub fn eval_partial(&self, values: &HashMap<VarId, Rational>) -> Poly {
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut kept = Vec::new();
            for (v, e) in m.iter() {
                match values.get(&v) {
                    Some(val) => coef *= num_traits::pow(val.clone(), e as usize),
                    None => kept.push((v, e)),
                }
            }
            if coef.is_zero() {
                continue;
            }
            *acc.entry(Monomial::from_pairs(kept)).or_insert_with(Rational::zero) += coef;
        }
        Poly::from_map(acc)
    }

    /// Full evaluation; `None` when some variable is unbound.
    pub fn eval(&self, values: &HashMap<VarId, Rational>) -> Option<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                t *= num_traits::pow(values.get(&v)?.clone(), e as usize);
            }
            total += t;
        }
        Some(total)
    }

    /// Common degree of every term within each variable group.
    pub fn multidegree(&self, groups: &[Vec<VarId>]) -> Result<Vec<u32>, Inhomogeneous> {
        let mut first: Option<(&Monomial, Vec<u32>)> = None;
        for m in self.terms.keys() {
            let degs: Vec<u32> = groups.iter().map(|g| m.degree_in(g)).collect();
            match &first {
                None => first = Some((m, degs)),
                Some((m0, d0)) => {
                    if let Some(gi) = (0..groups.len()).find(|&i| d0[i] != degs[i]) {
                        return Err(Inhomogeneous { group: gi, witness: ((*m0).clone(), m.clone()) });
                    }
                }
            }
        }
        Ok(first.map(|(_, d)| d).unwrap_or_else(|| vec![0; groups.len()]))
    }

    /// Splits the polynomial by its degree in each variable group.
    pub fn split_by_groups(&self, groups: &[Vec<VarId>]) -> BTreeMap<Vec<u32>, Poly> {
        let mut parts: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = groups.iter().map(|g| m.degree_in(g)).collect();
            parts.entry(key).or_default().terms.insert(m.clone(), c.clone());
        }
        parts
    }

    /// Coefficients with respect to the phase variables: `(i, j) -> coeff of x^i y^j`.
    pub fn phase_coefficients(&self) -> BTreeMap<(u32, u32), Poly> {
        let mut out: BTreeMap<(u32, u32), Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, i) = m.without(VarId::X);
            let (rest, j) = rest.without(VarId::Y);
            out.entry((i, j)).or_default().terms.insert(rest, c.clone());
        }
        out
    }

    /// Exact quotient `self / q`, or an error when `q` does not divide `self`.
    pub fn divide_exact(&self, q: &Poly) -> Result<Poly, PolyError> {
        let (lm, lc) = match q.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(PolyError::DivisionByZero),
        };
        let mut rem = self.clone();
        let mut quot: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(&lm).ok_or(PolyError::NotDivisible)?;
            let qc = rc / &lc;
            rem -= q.mul_monomial(&qc, &qm);
            quot.insert(qm, qc);
        }
        Ok(Poly { terms: quot })
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients
    /// and a positive leading coefficient.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        let mut content = Rational::new(num, den);
        if let Some((_, lc)) = self.leading_term() {
            if lc.is_negative() {
                content = -content;
            }
        }
        content
    }

    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        self.scale(&(Rational::one() / c))
    }

    /// Deterministic rendering in descending monomial order using the grammar
    /// accepted by [`Poly::parse`].
    pub fn to_text(&self, symbols: &Symbols) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms_desc().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (v, e) in m.iter() {
                if e == 1 {
                    factors.push(symbols.name(v).to_string());
                } else {
                    factors.push(format!("{}^{}", symbols.name(v), e));
                }
            }
            let _ = write!(s, "{}", factors.join("*"));
        }
        s
    }

    /// Largest numerator or denominator bit length among the coefficients.
    pub fn max_coefficient_bits(&self) -> u64 {
        self.terms.values().map(|c| c.numer().bits().max(c.denom().bits())).max().unwrap_or(0)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            match self.terms.get_mut(m) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), c.clone());
                }
            }
        }
    }
}

impl AddAssign<Poly> for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        *self += &rhs;
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            match self.terms.get_mut(m) {
                Some(v) => {
                    *v -= c;
                    if v.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), -c.clone());
                }
            }
        }
    }
}

impl SubAssign<Poly> for Poly {
    fn sub_assign(&mut self, rhs: Poly) {
        *self -= &rhs;
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let (small, large) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        if small.len() == 1 {
            let (m, c) = small.terms.iter().next().unwrap();
            return large.mul_monomial(c, m);
        }
        let mut acc: FxHashMap<Monomial, Rational> =
            FxHashMap::with_capacity_and_hasher(small.len() * large.len() / 2 + 1, Default::default());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                let m = ma.mul(mb);
                let prod = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        Poly::from_map(acc)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Poly {
        Poly::constant(c)
    }
}

impl From<VarId> for Poly {
    fn from(v: VarId) -> Poly {
        Poly::var(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn syms() -> Symbols {
        Symbols::new(["c", "d", "e", "f"])
    }

    #[test]
    fn difference_of_squares() {
        let (x, y) = (Poly::x(), Poly::y());
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p.to_text(&syms()), "x^2 - y^2");
    }

    #[test]
    fn additive_identity() {
        let p = Poly::parse("3/2*x*c - y^2 + 7", &syms()).unwrap();
        assert_eq!(&p + &Poly::zero(), p);
    }

    #[test]
    fn cube_of_sum_of_squares_matches_repeated_product() {
        let r2 = &Poly::x().pow(2) + &Poly::y().pow(2);
        let repeated = &(&r2 * &r2) * &r2;
        assert_eq!(r2.pow(3), repeated);
        assert_eq!(r2.pow(3).to_text(&syms()), "x^6 + 3*x^4*y^2 + 3*x^2*y^4 + y^6");
    }

    #[test]
    fn derivative_examples() {
        let s = syms();
        let p = Poly::parse("x^2*y", &s).unwrap();
        assert_eq!(p.derivative(VarId::X).to_text(&s), "2*x*y");
        assert!(Poly::int(5).derivative(VarId::X).is_zero());
    }

    #[test]
    fn multidegree_reports_witness() {
        let s = syms();
        let p = Poly::parse("x + x^2", &s).unwrap();
        let err = p.multidegree(&[vec![VarId::X, VarId::Y]]).unwrap_err();
        assert_eq!(err.group, 0);
        assert_ne!(err.witness.0.degree(), err.witness.1.degree());
    }

    #[test]
    fn exact_division_cases() {
        let s = syms();
        let p = Poly::parse("x^2 - y^2", &s).unwrap();
        let q = Poly::parse("x - y", &s).unwrap();
        assert_eq!(p.divide_exact(&q).unwrap().to_text(&s), "x + y");
        assert_eq!(Poly::x().divide_exact(&Poly::y()), Err(PolyError::NotDivisible));
        assert_eq!(p.divide_exact(&Poly::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn variety_substitution_turns_k2_into_circle() {
        let s = syms();
        let k2 = Poly::parse("-e*x^2 + c*x*y - f*x*y + d*y^2", &s).unwrap();
        let mut b = HashMap::new();
        b.insert(s.lookup("c").unwrap(), Poly::zero());
        b.insert(s.lookup("d").unwrap(), Poly::one());
        b.insert(s.lookup("e").unwrap(), Poly::int(-1));
        b.insert(s.lookup("f").unwrap(), Poly::zero());
        assert_eq!(k2.substitute(&b).to_text(&s), "x^2 + y^2");
        assert_eq!(k2.substitute(&HashMap::new()), k2);
    }

    #[test]
    fn content_and_primitive_part() {
        let s = syms();
        let p = Poly::parse("-6*x + 9/2*y", &s).unwrap();
        assert_eq!(p.content(), rat(-3, 2));
        assert_eq!(p.primitive_part().to_text(&s), "4*x - 3*y");
    }
}
