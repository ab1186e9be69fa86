//! Exact feasibility of strict linear inequalities and equalities over ℚ^d.
//!
//! Equalities are substituted away first; the remaining strict system is
//! solved by Fourier–Motzkin elimination. Every stage is kept so a witness
//! point can be read back.

use std::collections::BTreeMap;

use num::{BigRational, One, Signed, Zero};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    /// `a·x > r`
    Greater,
    /// `a·x = r`
    Equal,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
    pub rel: Relation,
}

impl Constraint {
    pub fn greater(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Constraint { coeffs, rhs, rel: Relation::Greater }
    }

    pub fn equal(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Constraint { coeffs, rhs, rel: Relation::Equal }
    }

    /// `-a·x > -r`, i.e. the strict opposite side.
    pub fn flipped(&self) -> Self {
        Constraint {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            rhs: -&self.rhs,
            rel: self.rel,
        }
    }

    pub fn holds_at(&self, x: &[BigRational]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.rel {
            Relation::Greater => lhs > self.rhs,
            Relation::Equal => lhs == self.rhs,
        }
    }
}

pub(crate) fn dot(a: &[BigRational], x: &[BigRational]) -> BigRational {
    a.iter().zip(x).fold(BigRational::zero(), |acc, (p, q)| acc + p * q)
}

/// `x_var = constant + Σ coeffs[k]·x_k`
struct Substitution {
    var: usize,
    coeffs: Vec<BigRational>,
    constant: BigRational,
}

/// A strict row `a·x > r`.
#[derive(Clone)]
struct Row {
    a: Vec<BigRational>,
    r: BigRational,
}

fn substitute(a: &mut [BigRational], r: &mut BigRational, sub: &Substitution) {
    let aj = std::mem::take(&mut a[sub.var]);
    if aj.is_zero() {
        return;
    }
    for (k, e) in sub.coeffs.iter().enumerate() {
        if !e.is_zero() {
            a[k] += &aj * e;
        }
    }
    *r -= &aj * &sub.constant;
}

/// Scales rows to a unit leading coefficient and keeps the tightest row per
/// direction. `None` when a constant row is violated.
fn normalize(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut best: BTreeMap<Vec<BigRational>, BigRational> = BTreeMap::new();
    for Row { a, r } in rows {
        match a.iter().find(|c| !c.is_zero()) {
            None => {
                // 0 > r
                if !r.is_negative() {
                    return None;
                }
            }
            Some(lead) => {
                let scale = lead.abs();
                let a: Vec<BigRational> = a.iter().map(|c| c / &scale).collect();
                let r = r / scale;
                best.entry(a)
                    .and_modify(|old| {
                        if r > *old {
                            *old = r.clone();
                        }
                    })
                    .or_insert(r);
            }
        }
    }
    Some(best.into_iter().map(|(a, r)| Row { a, r }).collect())
}

/// Some `x` satisfying every constraint, or `None` when there is none.
///
/// # Panics
/// If the constraints disagree on the dimension.
pub fn solve(constraints: &[Constraint]) -> Option<Vec<BigRational>> {
    let d = constraints.first().map_or(0, |c| c.coeffs.len());
    assert!(
        constraints.iter().all(|c| c.coeffs.len() == d),
        "constraints of mixed dimension"
    );

    let mut eqs: Vec<Row> = Vec::new();
    let mut rows: Vec<Row> = Vec::new();
    for c in constraints {
        let row = Row { a: c.coeffs.clone(), r: c.rhs.clone() };
        match c.rel {
            Relation::Equal => eqs.push(row),
            Relation::Greater => rows.push(row),
        }
    }

    let mut subs: Vec<Substitution> = Vec::new();
    for i in 0..eqs.len() {
        let Row { a, r } = eqs[i].clone();
        let Some(j) = a.iter().position(|c| !c.is_zero()) else {
            if r.is_zero() {
                continue;
            }
            return None;
        };
        let aj = a[j].clone();
        let mut coeffs: Vec<BigRational> = a.iter().map(|c| -c / &aj).collect();
        coeffs[j] = BigRational::zero();
        let sub = Substitution { var: j, coeffs, constant: r / aj };
        for row in eqs[i + 1..].iter_mut().chain(rows.iter_mut()) {
            substitute(&mut row.a, &mut row.r, &sub);
        }
        subs.push(sub);
    }

    let mut rows = normalize(rows)?;
    // stages[j]: the rows mentioning x_j at the moment it was eliminated.
    let mut stages: Vec<Vec<Row>> = Vec::with_capacity(d);
    for j in 0..d {
        let (with, without): (Vec<Row>, Vec<Row>) =
            rows.into_iter().partition(|row| !row.a[j].is_zero());
        let mut next = without;
        let (pos, neg): (Vec<&Row>, Vec<&Row>) =
            with.iter().partition(|row| row.a[j].is_positive());
        for p in &pos {
            for q in &neg {
                let wp = -&q.a[j];
                let wq = p.a[j].clone();
                let a = p
                    .a
                    .iter()
                    .zip(&q.a)
                    .map(|(x, y)| &wp * x + &wq * y)
                    .collect();
                next.push(Row { a, r: &wp * &p.r + &wq * &q.r });
            }
        }
        rows = normalize(next)?;
        stages.push(with);
    }
    debug_assert!(rows.is_empty());

    let mut x = vec![BigRational::zero(); d];
    for j in (0..d).rev() {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for row in &stages[j] {
            let rest: BigRational = row
                .a
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .fold(BigRational::zero(), |acc, (k, c)| acc + c * &x[k]);
            let bound = (&row.r - rest) / &row.a[j];
            if row.a[j].is_positive() {
                if lo.as_ref().map_or(true, |l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().map_or(true, |h| bound < *h) {
                hi = Some(bound);
            }
        }
        let one = BigRational::one();
        x[j] = match (lo, hi) {
            (Some(l), Some(h)) => (l + h) / BigRational::from_integer(2.into()),
            (Some(l), None) => l + one,
            (None, Some(h)) => h - one,
            (None, None) => BigRational::zero(),
        };
    }
    for sub in subs.iter().rev() {
        x[sub.var] = &sub.constant + dot(&sub.coeffs, &x);
    }
    debug_assert!(constraints.iter().all(|c| c.holds_at(&x)));
    Some(x)
}

/// Whether the constraints have a common solution.
pub fn feasible_strict(constraints: &[Constraint]) -> bool {
    solve(constraints).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn gt(a: &[i64], r: i64) -> Constraint {
        Constraint::greater(a.iter().map(|&v| q(v)).collect(), q(r))
    }

    fn eq(a: &[i64], r: i64) -> Constraint {
        Constraint::equal(a.iter().map(|&v| q(v)).collect(), q(r))
    }

    #[test]
    fn one_dimensional_examples() {
        assert!(feasible_strict(&[gt(&[1], 0), gt(&[-1], -1)]));
        assert!(!feasible_strict(&[gt(&[1], 0), gt(&[-1], 0)]));
        assert!(!feasible_strict(&[gt(&[1], 1), gt(&[-1], -1)]));
    }

    #[test]
    fn witness_satisfies_constraints() {
        let cs = [gt(&[1, 0], 0), gt(&[0, 1], 0), gt(&[1, 1], 2), gt(&[1, -1], 1)];
        let x = solve(&cs).unwrap();
        assert!(cs.iter().all(|c| c.holds_at(&x)));
    }

    #[test]
    fn equalities_are_substituted() {
        // x = y, x + y = 2, x > 0
        let cs = [eq(&[1, -1], 0), eq(&[1, 1], 2), gt(&[1, 0], 0)];
        assert_eq!(solve(&cs).unwrap(), vec![q(1), q(1)]);
        assert!(!feasible_strict(&[eq(&[1, -1], 0), eq(&[1, 1], 2), gt(&[1, 0], 1)]));
        assert!(!feasible_strict(&[eq(&[1, 0], 0), eq(&[1, 0], 1)]));
        assert!(feasible_strict(&[eq(&[0, 0], 0)]));
        assert!(!feasible_strict(&[eq(&[0, 0], 3)]));
    }

    #[test]
    fn empty_system_is_feasible() {
        assert!(feasible_strict(&[]));
        assert!(feasible_strict(&[gt(&[0, 0, 0], -1)]));
        assert!(!feasible_strict(&[gt(&[0, 0, 0], 0)]));
    }

    #[test]
    fn strictness_matters_in_two_dimensions() {
        // x > 0, y > 0, x + y < 0 has no solution; with the last relaxed to
        // a degenerate corner it still has none.
        assert!(!feasible_strict(&[gt(&[1, 0], 0), gt(&[0, 1], 0), gt(&[-1, -1], 0)]));
        assert!(feasible_strict(&[gt(&[1, 0], 0), gt(&[0, 1], 0), gt(&[-1, -1], -1)]));
    }
}
