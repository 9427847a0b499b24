//! Exact phase-1 simplex for `{ A d = b, d >= 0 }` with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Phase1 {
    /// A nonnegative solution `d`.
    Feasible(Vec<BigRational>),
    /// Farkas multipliers `y` with `A^T y <= 0` and `b^T y > 0`.
    Infeasible(Vec<BigRational>),
}

/// Minimizes the sum of artificial variables. Pivots are chosen by Bland's
/// rule, so the result is a deterministic function of `(a, b)`.
pub(crate) fn phase_one(a: &[Vec<BigRational>], b: &[BigRational]) -> Phase1 {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m;

    let mut sign = vec![1i8; m];
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        sign[i] = if flip { -1 } else { 1 };
        let mut row = Vec::with_capacity(width);
        row.extend(a[i].iter().map(|x| if flip { -x } else { x.clone() }));
        row.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
        rows.push(row);
        rhs.push(if flip { -&b[i] } else { b[i].clone() });
    }
    let mut basis: Vec<usize> = (n..width).collect();

    // Reduced costs for cost 1 on artificials: c_j - 1^T A'_j.
    let mut cost: Vec<BigRational> = (0..width)
        .map(|j| {
            if j >= n {
                BigRational::zero()
            } else {
                -rows.iter().map(|r| &r[j]).sum::<BigRational>()
            }
        })
        .collect();
    let mut objective: BigRational = rhs.iter().sum();

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if rows[i][enter].is_positive() {
                let ratio = &rhs[i] / &rows[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase 1 is bounded below by zero, so an entering column always has a leaving row.
        let (r, _) = leave.expect("phase-1 objective is bounded");
        pivot(&mut rows, &mut rhs, &mut cost, &mut objective, r, enter);
        basis[r] = enter;
    }

    if objective.is_zero() {
        let mut d = vec![BigRational::zero(); n];
        for (i, &j) in basis.iter().enumerate() {
            if j < n {
                d[j] = rhs[i].clone();
            }
        }
        Phase1::Feasible(d)
    } else {
        // Simplex multipliers: reduced cost of artificial k is 1 - y_k.
        let y = (0..m)
            .map(|k| {
                let yk = BigRational::one() - &cost[n + k];
                if sign[k] < 0 {
                    -yk
                } else {
                    yk
                }
            })
            .collect();
        Phase1::Infeasible(y)
    }
}

fn pivot(
    rows: &mut [Vec<BigRational>],
    rhs: &mut [BigRational],
    cost: &mut [BigRational],
    objective: &mut BigRational,
    r: usize,
    c: usize,
) {
    let p = rows[r][c].clone();
    if !p.is_one() {
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x / &p;
            }
        }
        rhs[r] = &rhs[r] / &p;
    }
    let pivot_row = rows[r].clone();
    let pivot_rhs = rhs[r].clone();
    for (i, row) in rows.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        eliminate(row, &pivot_row, &f);
        rhs[i] = &rhs[i] - &f * &pivot_rhs;
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        eliminate(cost, &pivot_row, &f);
        *objective = &*objective + &f * &pivot_rhs;
    }
}

fn eliminate(row: &mut [BigRational], pivot_row: &[BigRational], f: &BigRational) {
    for (x, p) in row.iter_mut().zip(pivot_row) {
        if !p.is_zero() {
            *x = &*x - f * p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect()
    }

    fn check_farkas(a: &[Vec<BigRational>], b: &[BigRational], y: &[BigRational]) {
        let by: BigRational = b.iter().zip(y).map(|(bi, yi)| bi * yi).sum();
        assert!(by.is_positive());
        for j in 0..a[0].len() {
            let col: BigRational = a.iter().zip(y).map(|(row, yi)| &row[j] * yi).sum();
            assert!(!col.is_positive());
        }
    }

    #[test]
    fn finds_feasible_point() {
        let a = mat(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = vec![r(2), r(3)];
        let Phase1::Feasible(d) = phase_one(&a, &b) else { panic!("expected feasible") };
        assert_eq!(&d[0] + &d[1], r(2));
        assert_eq!(&d[1] + &d[2], r(3));
        assert!(d.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn certifies_infeasibility() {
        // d0 + d1 = -1 has no nonnegative solution.
        let a = mat(&[&[1, 1]]);
        let b = vec![r(-1)];
        let Phase1::Infeasible(y) = phase_one(&a, &b) else { panic!("expected infeasible") };
        check_farkas(&a, &b, &y);

        let a = mat(&[&[1, -1], &[-1, 1]]);
        let b = vec![r(1), r(1)];
        let Phase1::Infeasible(y) = phase_one(&a, &b) else { panic!("expected infeasible") };
        check_farkas(&a, &b, &y);
    }

    #[test]
    fn redundant_rows_are_fine() {
        let a = mat(&[&[1, 2, 0], &[2, 4, 0], &[0, 0, 1]]);
        let b = vec![r(4), r(8), r(0)];
        let Phase1::Feasible(d) = phase_one(&a, &b) else { panic!("expected feasible") };
        assert_eq!(&d[0] + r(2) * &d[1], r(4));
        assert!(d[2].is_zero());
    }

    #[test]
    fn deterministic() {
        let a = mat(&[&[1, 1, 1, 1], &[1, -1, 2, 0]]);
        let b = vec![r(3), r(1)];
        assert_eq!(phase_one(&a, &b), phase_one(&a, &b));
    }
}
