//! Oracles shared by the integration tests. None of them goes through the
//! engine's matrix builders or operator tables.
#![allow(dead_code)]

use std::collections::HashMap;

use centerfocus::focal::default_free_position;
use centerfocus::linalg::RatMatrix;
use centerfocus::poly::{int, rat, Monomial, Poly, Rational, VarId};
use centerfocus::system::{Side, SystemSpec};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Mat2 = [[Rational; 2]; 2];

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n = rng.gen_range(-12i64..=12);
    rat(if n == 0 { 5 } else { n }, rng.gen_range(1..=5))
}

pub fn random_matrix(rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let m = [[small_rational(rng), small_rational(rng)], [small_rational(rng), small_rational(rng)]];
        if !det(&m).is_zero() {
            return m;
        }
    }
}

pub fn det(m: &Mat2) -> Rational {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

pub fn inverse(m: &Mat2) -> Mat2 {
    let d = det(m);
    [
        [&m[1][1] / &d, -&m[0][1] / &d],
        [-&m[1][0] / &d, &m[0][0] / &d],
    ]
}

fn phase(x: &Rational, y: &Rational) -> HashMap<VarId, Rational> {
    HashMap::from([(VarId::X, x.clone()), (VarId::Y, y.clone())])
}

/// Value of `p` at coefficient values `point` and phase point `(x, y)`.
pub fn eval_at(p: &Poly, point: &HashMap<VarId, Rational>, x: &Rational, y: &Rational) -> Rational {
    let mut all = point.clone();
    all.extend(phase(x, y));
    p.eval(&all).expect("every variable assigned")
}

/// Coefficients of the system obtained by the change of variables
/// `(x, y) = m (x', y')`: the new field is `m^-1 F(m x')`.
pub fn transform(spec: &SystemSpec, point: &HashMap<VarId, Rational>, m: &Mat2) -> HashMap<VarId, Rational> {
    let vf = spec.vector_field();
    let p = vf.p.eval_partial(point);
    let q = vf.q.eval_partial(point);
    let sub = HashMap::from([
        (VarId::X, &Poly::x().scale(&m[0][0]) + &Poly::y().scale(&m[0][1])),
        (VarId::Y, &Poly::x().scale(&m[1][0]) + &Poly::y().scale(&m[1][1])),
    ]);
    let (p, q) = (p.substitute(&sub), q.substitute(&sub));
    let inv = inverse(m);
    let new_p = &p.scale(&inv[0][0]) + &q.scale(&inv[0][1]);
    let new_q = &p.scale(&inv[1][0]) + &q.scale(&inv[1][1]);
    let mut out = HashMap::new();
    for (i, slot) in spec.slots().iter().enumerate() {
        let d = slot.component_degree;
        let mono = Monomial::from_pairs([(VarId::X, d - slot.position), (VarId::Y, slot.position)]);
        let poly = if slot.side == Side::P { &new_p } else { &new_q };
        out.insert(VarId::coeff(i as u32), poly.coefficient(&mono) / int(slot.prefactor as i64));
    }
    out
}

/// `K(a', x') = det(m)^weight K(a, m x')` at one random configuration.
pub fn equivariant_at(
    k: &Poly,
    spec: &SystemSpec,
    point: &HashMap<VarId, Rational>,
    m: &Mat2,
    weight: i64,
    xp: (&Rational, &Rational),
) -> bool {
    let moved = transform(spec, point, m);
    let x = &m[0][0] * xp.0 + &m[0][1] * xp.1;
    let y = &m[1][0] * xp.0 + &m[1][1] * xp.1;
    let lhs = eval_at(k, &moved, xp.0, xp.1);
    let rhs = eval_at(k, point, &x, &y) * pow(&det(m), weight);
    lhs == rhs
}

pub fn pow(r: &Rational, e: i64) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e.unsigned_abs() {
        out *= r;
    }
    if e < 0 {
        Rational::one() / out
    } else {
        out
    }
}

fn at_origin(p: &Poly) -> Poly {
    p.eval_partial(&phase(&Rational::zero(), &Rational::zero()))
}

fn d(p: &Poly, vars: &[VarId]) -> Poly {
    vars.iter().fold(p.clone(), |acc, v| acc.derivative(*v))
}

/// Classical first Lyapunov coefficient `a` for `x' = -w y + f, y' = w x + g`
/// (f, g without linear terms), doubled to match `dU/dt = L1 (x^2+y^2)^2`
/// with `U = x^2 + y^2 + ...`. The spec must be on the chart `x' = y, y' = -x`.
pub fn classical_l1(spec: &SystemSpec) -> Poly {
    let vf = spec.vector_field();
    let f = &vf.p - &Poly::y();
    let g = &vf.q + &Poly::x();
    let (x, y) = (VarId::X, VarId::Y);
    let c = |p: &Poly, v: &[VarId]| at_origin(&d(p, v));
    let third = &(&(&c(&f, &[x, x, x]) + &c(&f, &[x, y, y])) + &c(&g, &[x, x, y])) + &c(&g, &[y, y, y]);
    let second = &(&(&(&c(&f, &[x, y]) * &(&c(&f, &[x, x]) + &c(&f, &[y, y])))
        - &(&c(&g, &[x, y]) * &(&c(&g, &[x, x]) + &c(&g, &[y, y]))))
        - &(&c(&f, &[x, x]) * &c(&g, &[x, x])))
        + &(&c(&f, &[y, y]) * &c(&g, &[y, y]));
    // w = -1 on this chart
    let a = &third.scale(&rat(1, 16)) - &second.scale(&rat(1, 16));
    a.scale(&int(2))
}

/// `L_1..L_K` for a concrete system on the chart `x' = y, y' = -x`, by solving
/// for `U = x^2 + y^2 + F_3 + ...` in the monomial basis. In `F_2m` the
/// monomial at the default free position is fixed to 0.
pub fn series_oracle(spec: &SystemSpec, k_max: u32) -> Vec<Rational> {
    let vf = spec.vector_field();
    let assign = spec.assignment();
    let (p, q) = (vf.p.eval_partial(&assign), vf.q.eval_partial(&assign));
    assert!(p.variables().iter().all(|v| v.is_phase()) && q.variables().iter().all(|v| v.is_phase()));
    let mut u = &Poly::x().pow(2) + &Poly::y().pow(2);
    let mono = |r: u32, j: u32| Monomial::from_pairs([(VarId::X, r - j), (VarId::Y, j)]);
    let mut out = Vec::new();
    for r in 3..=2 * k_max + 2 {
        let du = &(&u.derivative(VarId::X) * &p) + &(&u.derivative(VarId::Y) * &q);
        let rhs: Vec<Rational> = (0..=r).map(|i| -du.coefficient(&mono(r, i))).collect();
        let even = r % 2 == 0;
        let free = if even { Some(default_free_position(r)) } else { None };
        let cols: Vec<u32> = (0..=r).filter(|j| Some(*j) != free).collect();
        let mut rows = vec![vec![Rational::zero(); r as usize + 1]; r as usize + 1];
        for (c, &j) in cols.iter().enumerate() {
            // x' = y, y' = -x applied to x^(r-j) y^j
            if j < r {
                rows[j as usize + 1][c] += int((r - j) as i64);
            }
            if j > 0 {
                rows[j as usize - 1][c] -= int(j as i64);
            }
        }
        if even {
            let circle = (&Poly::x().pow(2) + &Poly::y().pow(2)).pow(r / 2);
            for (i, row) in rows.iter_mut().enumerate() {
                row[cols.len()] = -circle.coefficient(&mono(r, i as u32));
            }
        }
        let sol = RatMatrix::from_rows(rows).solve(&rhs).expect("matching system is regular");
        for (c, &j) in cols.iter().enumerate() {
            u += Poly::term(sol[c].clone(), mono(r, j));
        }
        if even {
            out.push(sol[cols.len()].clone());
        }
    }
    out
}
