//! Exact rational linear programming (dense two-phase simplex with Bland's
//! rule) and polyhedral cone membership built on top of it.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::{rational_rank, IntScalar, LatticeError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult<T: IntScalar> {
    Infeasible,
    Unbounded,
    Optimal { objective: Ratio<T>, solution: Vec<Ratio<T>> },
}

struct Tableau<T: IntScalar> {
    // m x (n + 1) rows: coefficients | rhs. Objective handled separately.
    rows: Vec<Vec<Ratio<T>>>,
    basis: Vec<usize>,
    n: usize,
}

impl<T: IntScalar> Tableau<T> {
    fn m(&self) -> usize {
        self.rows.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        debug_assert!(!piv.is_zero());
        for j in 0..=self.n {
            self.rows[r][j] = &self.rows[r][j] / &piv;
        }
        for i in 0..self.m() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..=self.n {
                let sub = &f * &self.rows[r][j];
                self.rows[i][j] = &self.rows[i][j] - &sub;
            }
        }
        self.basis[r] = c;
    }

    /// Maximize `obj . x` from the current basic feasible point. Returns
    /// `None` when unbounded. `allowed` masks columns the simplex may enter.
    fn optimize(&mut self, obj: &[Ratio<T>], allowed: &dyn Fn(usize) -> bool) -> Option<()> {
        loop {
            // Reduced costs: c_j - c_B . B^-1 A_j, computed from scratch each
            // round; the problems here are tiny.
            let mut entering = None;
            for j in 0..self.n {
                if !allowed(j) || self.basis.contains(&j) {
                    continue;
                }
                let mut red = obj[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    let sub = &obj[b] * &self.rows[i][j];
                    red = &red - &sub;
                }
                if red.is_positive() {
                    entering = Some(j); // Bland: lowest index
                    break;
                }
            }
            let Some(c) = entering else { return Some(()) };
            let mut leaving: Option<(usize, Ratio<T>)> = None;
            for i in 0..self.m() {
                if !self.rows[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][self.n] / &self.rows[i][c];
                let better = match &leaving {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((r, _)) = leaving else { return None };
            self.pivot(r, c);
        }
    }
}

/// Maximize `c . x` subject to `a x = b`, `x >= 0`, exactly over the
/// rationals.
pub fn simplex_max<T: IntScalar>(
    a: &[Vec<Ratio<T>>],
    b: &[Ratio<T>],
    c: &[Ratio<T>],
) -> LpResult<T> {
    let m = a.len();
    let n = if m > 0 { a[0].len() } else { c.len() };
    assert!(a.iter().all(|row| row.len() == n));
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);

    // Build rows with artificial variables n..n+m, rhs made non-negative.
    let total = n + m;
    let mut rows: Vec<Vec<Ratio<T>>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Ratio<T>> = Vec::with_capacity(total + 1);
        let negate = b[i].is_negative();
        for j in 0..n {
            row.push(if negate { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for j in 0..m {
            row.push(if j == i { Ratio::one() } else { Ratio::zero() });
        }
        row.push(if negate { -b[i].clone() } else { b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (n..total).collect(), n: total };

    // Phase 1: maximize -(sum of artificials).
    let phase1: Vec<Ratio<T>> = (0..total)
        .map(|j| if j < n { Ratio::zero() } else { -Ratio::<T>::one() })
        .collect();
    t.optimize(&phase1, &|_| true).expect("phase 1 is bounded");
    let mut art_sum = Ratio::<T>::zero();
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv >= n {
            art_sum = &art_sum + &t.rows[i][t.n];
        }
    }
    if !art_sum.is_zero() {
        return LpResult::Infeasible;
    }
    // Drive remaining artificial variables out of the basis where possible.
    for i in 0..t.m() {
        if t.basis[i] < n {
            continue;
        }
        if let Some(c) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
            t.pivot(i, c);
        }
        // Otherwise the row is all-zero on structural columns (redundant
        // constraint with zero rhs); it can stay, artificial pinned at 0.
    }

    // Phase 2: original objective, artificial columns forbidden.
    let phase2: Vec<Ratio<T>> =
        (0..total).map(|j| if j < n { c[j].clone() } else { Ratio::zero() }).collect();
    if t.optimize(&phase2, &|j| j < n).is_none() {
        return LpResult::Unbounded;
    }

    let mut x = vec![Ratio::<T>::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.rows[i][t.n].clone();
        }
    }
    let mut objective = Ratio::<T>::zero();
    for j in 0..n {
        objective = &objective + &(&c[j] * &x[j]);
    }
    LpResult::Optimal { objective, solution: x }
}

/// Feasibility of `a x = b`, `x >= 0`.
pub fn feasible<T: IntScalar>(a: &[Vec<Ratio<T>>], b: &[Ratio<T>]) -> Option<Vec<Ratio<T>>> {
    let n = a.first().map_or(0, Vec::len);
    match simplex_max(a, b, &vec![Ratio::zero(); n]) {
        LpResult::Optimal { solution, .. } => Some(solution),
        _ => None,
    }
}

/// Is `x` a non-negative rational combination of `generators`? With `strict`,
/// is it in the topological interior of that cone (full-dimensionality plus a
/// combination using every generator with a strictly positive coefficient)?
pub fn cone_membership<T: IntScalar>(
    generators: &[Vec<Ratio<T>>],
    x: &[Ratio<T>],
    strict: bool,
) -> Result<bool, LatticeError> {
    let dim = x.len();
    for g in generators {
        if g.len() != dim {
            return Err(LatticeError::DimensionMismatch { expected: dim, got: g.len() });
        }
    }
    let k = generators.len();
    if k == 0 {
        return Ok(!strict && x.iter().all(Zero::is_zero));
    }

    if !strict {
        // lambda >= 0 with sum lambda_i g_i = x.
        let a: Vec<Vec<Ratio<T>>> =
            (0..dim).map(|r| (0..k).map(|i| generators[i][r].clone()).collect()).collect();
        return Ok(feasible(&a, x).is_some());
    }

    // Interior: cone must be full-dimensional, and the minimum coefficient
    // over representations x = sum lambda_i g_i must be positive. Variables
    // (s_1..s_k, t+, t-) >= 0 encode lambda_i = s_i + t+ - t-; maximize t.
    if rational_rank(generators) < dim {
        return Ok(false);
    }
    let gsum: Vec<Ratio<T>> = (0..dim)
        .map(|r| {
            let mut acc = Ratio::zero();
            for g in generators {
                acc = &acc + &g[r];
            }
            acc
        })
        .collect();
    let a: Vec<Vec<Ratio<T>>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Ratio<T>> = (0..k).map(|i| generators[i][r].clone()).collect();
            row.push(gsum[r].clone());
            row.push(-gsum[r].clone());
            row
        })
        .collect();
    let mut c = vec![Ratio::<T>::zero(); k];
    c.push(Ratio::one());
    c.push(-Ratio::<T>::one());
    Ok(match simplex_max(&a, x, &c) {
        LpResult::Infeasible => false,
        LpResult::Unbounded => true,
        LpResult::Optimal { objective, .. } => objective.is_positive(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type Q = Ratio<BigInt>;

    fn q(n: i64) -> Q {
        Ratio::from_integer(BigInt::from(n))
    }

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&n| q(n)).collect()
    }

    #[test]
    fn membership_in_first_quadrant() {
        let gens = vec![qv(&[1, 0]), qv(&[0, 1])];
        assert!(cone_membership(&gens, &qv(&[1, 1]), true).unwrap());
        assert!(cone_membership(&gens, &qv(&[1, 0]), false).unwrap());
        assert!(!cone_membership(&gens, &qv(&[1, 0]), true).unwrap(), "boundary is not interior");
        assert!(!cone_membership(&gens, &qv(&[-1, 1]), false).unwrap());
        assert!(cone_membership(&gens, &qv(&[0, 0]), false).unwrap());
        assert!(!cone_membership(&gens, &qv(&[0, 0]), true).unwrap());
    }

    #[test]
    fn lower_dimensional_cone_has_empty_interior() {
        let gens = vec![qv(&[1, 0]), qv(&[-1, 0])];
        assert!(cone_membership(&gens, &qv(&[3, 0]), false).unwrap());
        assert!(!cone_membership(&gens, &qv(&[3, 0]), true).unwrap());
    }

    #[test]
    fn unbounded_interior_coefficients() {
        // Opposite generators: t can grow without bound, still interior.
        let gens = vec![qv(&[1, 0]), qv(&[-1, 0]), qv(&[0, 1])];
        assert!(cone_membership(&gens, &qv(&[0, 1]), true).unwrap());
        // Half-plane boundary point.
        assert!(!cone_membership(&gens, &qv(&[1, 0]), true).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let gens = vec![qv(&[1, 0, 0])];
        assert!(cone_membership(&gens, &qv(&[1, 0]), false).is_err());
    }

    /// Independent 2-D oracle. Closed membership is Caratheodory in the
    /// plane: x lies in the cone iff it is a non-negative combination of at
    /// most two generators, decided by exact cross products. Interior
    /// membership uses scale invariance: with integer data bounded by 3, x is
    /// interior iff the four points N*x +- e_i stay in the cone for N = 1000
    /// (their hull is a unit diamond around N*x, and every facet normal has
    /// pairing at least N - 3 with it).
    fn planar_cone_oracle(gens: &[(i64, i64)], x: (i64, i64), strict: bool) -> bool {
        let cross = |a: (i64, i64), b: (i64, i64)| a.0 * b.1 - a.1 * b.0;
        let dot = |a: (i64, i64), b: (i64, i64)| a.0 * b.0 + a.1 * b.1;
        let gens: Vec<(i64, i64)> = gens.iter().copied().filter(|&g| g != (0, 0)).collect();
        if gens.is_empty() {
            return x == (0, 0) && !strict;
        }
        let member = |x: (i64, i64)| -> bool {
            if x == (0, 0) {
                return true;
            }
            for &g in &gens {
                if cross(g, x) == 0 && dot(g, x) > 0 {
                    return true;
                }
            }
            for &g in &gens {
                for &h in &gens {
                    if cross(g, h) > 0 && cross(x, h) >= 0 && cross(g, x) >= 0 {
                        return true;
                    }
                }
            }
            false
        };
        if !member(x) {
            return false;
        }
        if !strict {
            return true;
        }
        let n = 1000;
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .all(|&e| member((n * x.0 + e.0, n * x.1 + e.1)))
    }

    #[test]
    fn agrees_with_planar_oracle_on_small_instances() {
        // Exhaustive-ish sweep over small generator sets and query points.
        let vecs: Vec<(i64, i64)> = vec![(1, 0), (0, 1), (-1, 0), (0, -1), (2, 1), (-1, -3), (3, -2), (1, 1)];
        let mut checked = 0;
        for i in 0..vecs.len() {
            for j in i..vecs.len() {
                for k in j..vecs.len() {
                    let gens = [vecs[i], vecs[j], vecs[k]];
                    let gq: Vec<Vec<Q>> = gens.iter().map(|g| qv(&[g.0, g.1])).collect();
                    for x in
                        [(1, 1), (-2, 1), (0, -3), (2, -1), (1, 0), (0, 0), (-3, -3), (3, 2)]
                    {
                        for strict in [false, true] {
                            let got =
                                cone_membership(&gq, &qv(&[x.0, x.1]), strict).unwrap();
                            let want = planar_cone_oracle(&gens, x, strict);
                            assert_eq!(
                                got, want,
                                "gens={gens:?} x={x:?} strict={strict}"
                            );
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn constructed_members_and_separated_points_in_3d() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let k = rng.random_range(3..6);
            let gens: Vec<Vec<Q>> = (0..k)
                .map(|_| qv(&[rng.random_range(-3..=3), rng.random_range(-3..=3), rng.random_range(-3..=3)]))
                .collect();
            // Positive combination with all coefficients >= 1 is interior
            // whenever the cone is full-dimensional.
            let coeffs: Vec<i64> = (0..k).map(|_| rng.random_range(1..=4)).collect();
            let x: Vec<Q> = (0..3)
                .map(|r| {
                    let mut acc = q(0);
                    for (c, g) in coeffs.iter().zip(&gens) {
                        acc = &acc + &(&q(*c) * &g[r]);
                    }
                    acc
                })
                .collect();
            assert!(cone_membership(&gens, &x, false).unwrap());
            if rational_rank(&gens) == 3 {
                assert!(cone_membership(&gens, &x, true).unwrap());
            }
            // Separating functional: phi(g) >= 0 for all g, phi(y) < 0
            // certifies y outside.
            let phi: Vec<i64> = loop {
                let cand: Vec<i64> = (0..3).map(|_| rng.random_range(-3..=3)).collect();
                if cand.iter().any(|&c| c != 0) {
                    break cand;
                }
            };
            let pairing = |v: &[Q]| -> Q {
                let mut acc = q(0);
                for (r, p) in phi.iter().enumerate() {
                    acc = &acc + &(&q(*p) * &v[r]);
                }
                acc
            };
            if gens.iter().all(|g| !pairing(g).is_negative()) {
                let y = qv(&[-phi[0], -phi[1], -phi[2]]);
                if pairing(&y).is_negative() {
                    assert!(!cone_membership(&gens, &y, false).unwrap());
                    assert!(!cone_membership(&gens, &y, true).unwrap());
                }
            }
        }
    }
}
