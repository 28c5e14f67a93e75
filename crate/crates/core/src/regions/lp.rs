//! Dense two-phase simplex over `x >= 0`, returning the lexicographically
//! smallest optimal vertex. Sized for the handful of variables the
//! rate-splitting problem needs.

const PIVOT_EPS: f64 = 1e-12;
const FEAS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal(Vec<f64>),
    Infeasible,
}

#[derive(Debug, Default)]
pub(crate) struct LinearProgram {
    num_vars: usize,
    eq: Vec<(Vec<f64>, f64)>,
    le: Vec<(Vec<f64>, f64)>,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    allowed: Vec<bool>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        (0..self.width)
            .map(|j| {
                cost[j]
                    - self
                        .rows
                        .iter()
                        .zip(&self.basis)
                        .map(|(row, &b)| cost[b] * row[j])
                        .sum::<f64>()
            })
            .collect()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Minimises `cost` with Bland's rule.
    fn minimise(&mut self, cost: &[f64]) {
        loop {
            let rc = self.reduced_costs(cost);
            let entering = (0..self.width)
                .find(|&j| self.allowed[j] && !self.basis.contains(&j) && rc[j] < -PIVOT_EPS);
            let Some(c) = entering else { return };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i) / a;
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - PIVOT_EPS
                                || (ratio <= lr + PIVOT_EPS && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            // The objectives used here are bounded below on x >= 0.
            let Some((r, _)) = leave else { return };
            self.pivot(r, c);
        }
    }

    fn objective(&self, cost: &[f64]) -> f64 {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &b)| cost[b] * self.rhs(i))
            .sum()
    }
}

impl LinearProgram {
    pub(crate) fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            ..Default::default()
        }
    }

    pub(crate) fn add_eq(&mut self, coeffs: Vec<f64>, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.eq.push((coeffs, rhs));
    }

    pub(crate) fn add_le(&mut self, coeffs: Vec<f64>, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.le.push((coeffs, rhs));
    }

    /// Lexicographically smallest feasible `x`: minimise `x_1`, then `x_2`
    /// over the minimisers of `x_1`, and so on.
    pub(crate) fn lex_min(&self) -> LpOutcome {
        let n = self.num_vars;
        let n_slack = self.le.len();
        // rows: (coeffs over structural vars, slack sign, rhs)
        let mut specs: Vec<(Vec<f64>, Option<(usize, f64)>, f64)> = Vec::new();
        for (k, (a, b)) in self.le.iter().enumerate() {
            if *b >= 0.0 {
                specs.push((a.clone(), Some((k, 1.0)), *b));
            } else {
                specs.push((a.iter().map(|v| -v).collect(), Some((k, -1.0)), -b));
            }
        }
        for (a, b) in &self.eq {
            if *b >= 0.0 {
                specs.push((a.clone(), None, *b));
            } else {
                specs.push((a.iter().map(|v| -v).collect(), None, -b));
            }
        }
        let needs_art: Vec<bool> = specs
            .iter()
            .map(|(_, s, _)| !matches!(s, Some((_, sign)) if *sign > 0.0))
            .collect();
        let n_art = needs_art.iter().filter(|&&x| x).count();
        let width = n + n_slack + n_art;

        let mut rows = Vec::with_capacity(specs.len());
        let mut basis = Vec::with_capacity(specs.len());
        let mut art = n + n_slack;
        for ((a, slack, b), &need) in specs.iter().zip(&needs_art) {
            let mut row = vec![0.0; width + 1];
            row[..n].copy_from_slice(a);
            if let Some((k, sign)) = slack {
                row[n + k] = *sign;
            }
            row[width] = *b;
            if need {
                row[art] = 1.0;
                basis.push(art);
                art += 1;
            } else {
                basis.push(n + slack.unwrap().0);
            }
            rows.push(row);
        }
        let mut t = Tableau {
            rows,
            basis,
            allowed: vec![true; width],
            width,
        };

        if n_art > 0 {
            let mut cost = vec![0.0; width];
            for c in cost.iter_mut().skip(n + n_slack) {
                *c = 1.0;
            }
            t.minimise(&cost);
            if t.objective(&cost) > FEAS_TOL {
                return LpOutcome::Infeasible;
            }
            // Drive remaining (zero-valued) artificials out of the basis.
            let mut i = 0;
            while i < t.rows.len() {
                if t.basis[i] >= n + n_slack {
                    match (0..n + n_slack).find(|&j| t.rows[i][j].abs() > PIVOT_EPS) {
                        Some(j) => t.pivot(i, j),
                        None => {
                            t.rows.remove(i);
                            t.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
            for a in t.allowed.iter_mut().skip(n + n_slack) {
                *a = false;
            }
        }

        for var in 0..n {
            let mut cost = vec![0.0; width];
            cost[var] = 1.0;
            t.minimise(&cost);
            // Nonbasic columns with positive reduced cost must stay at zero
            // to keep every earlier objective at its optimum.
            let rc = t.reduced_costs(&cost);
            for j in 0..width {
                if rc[j] > PIVOT_EPS && !t.basis.contains(&j) {
                    t.allowed[j] = false;
                }
            }
        }

        let mut x = vec![0.0; n];
        for (i, &b) in t.basis.iter().enumerate() {
            if b < n {
                x[b] = t.rhs(i).max(0.0);
            }
        }
        LpOutcome::Optimal(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(lp: &LinearProgram) -> Vec<f64> {
        match lp.lex_min() {
            LpOutcome::Optimal(x) => x,
            LpOutcome::Infeasible => panic!("unexpectedly infeasible"),
        }
    }

    #[test]
    fn lexicographic_vertex_of_simplex_face() {
        // x1 + x2 = 1, x1 <= 0.7, x2 <= 0.8  ->  x1 as small as possible: (0.2, 0.8)
        let mut lp = LinearProgram::new(2);
        lp.add_eq(vec![1.0, 1.0], 1.0);
        lp.add_le(vec![1.0, 0.0], 0.7);
        lp.add_le(vec![0.0, 1.0], 0.8);
        let x = solve(&lp);
        assert!((x[0] - 0.2).abs() < 1e-14 && (x[1] - 0.8).abs() < 1e-14);
    }

    #[test]
    fn detects_infeasibility() {
        let mut lp = LinearProgram::new(2);
        lp.add_eq(vec![1.0, 1.0], 2.0);
        lp.add_le(vec![1.0, 1.0], 1.5);
        assert_eq!(lp.lex_min(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(1);
        lp.add_le(vec![1.0], -0.5);
        assert_eq!(lp.lex_min(), LpOutcome::Infeasible);
    }

    #[test]
    fn negative_rhs_rows_are_handled() {
        // -x1 <= -0.3 forces x1 >= 0.3
        let mut lp = LinearProgram::new(2);
        lp.add_le(vec![-1.0, 0.0], -0.3);
        lp.add_le(vec![1.0, 1.0], 1.0);
        let x = solve(&lp);
        assert!((x[0] - 0.3).abs() < 1e-14);
        assert_eq!(x[1], 0.0);
    }

    #[test]
    fn three_variables_with_redundant_equality() {
        let mut lp = LinearProgram::new(3);
        lp.add_eq(vec![1.0, 1.0, 1.0], 1.0);
        lp.add_eq(vec![2.0, 2.0, 2.0], 2.0);
        lp.add_le(vec![0.0, 1.0, 0.0], 0.25);
        lp.add_le(vec![0.0, 0.0, 1.0], 0.5);
        let x = solve(&lp);
        assert!((x[0] - 0.25).abs() < 1e-14);
        assert!((x[1] - 0.25).abs() < 1e-14);
        assert!((x[2] - 0.5).abs() < 1e-14);
    }

    proptest::proptest! {
        #[test]
        fn feasible_programs_return_feasible_lex_minimum(
            x0 in proptest::collection::vec(0.0f64..2.0, 4),
            a in proptest::collection::vec(-1.0f64..1.0, 12),
            slack in proptest::collection::vec(0.0f64..0.5, 2),
        ) {
            // One equality and two inequalities, all satisfied by x0.
            let rows: Vec<Vec<f64>> = a.chunks(4).map(<[f64]>::to_vec).collect();
            let dot = |r: &[f64], x: &[f64]| r.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
            let mut lp = LinearProgram::new(4);
            lp.add_eq(rows[0].clone(), dot(&rows[0], &x0));
            lp.add_le(rows[1].clone(), dot(&rows[1], &x0) + slack[0]);
            lp.add_le(rows[2].clone(), dot(&rows[2], &x0) + slack[1]);
            let x = solve(&lp);
            proptest::prop_assert!(x.iter().all(|&v| v >= 0.0));
            proptest::prop_assert!((dot(&rows[0], &x) - dot(&rows[0], &x0)).abs() <= 1e-9);
            proptest::prop_assert!(dot(&rows[1], &x) <= dot(&rows[1], &x0) + slack[0] + 1e-9);
            proptest::prop_assert!(dot(&rows[2], &x) <= dot(&rows[2], &x0) + slack[1] + 1e-9);
            proptest::prop_assert!(x[0] <= x0[0] + 1e-9);
        }
    }
}
