//! Butcher tableaus of the underlying explicit Runge-Kutta methods.
//!
//! A tableau stores the abscissas `c_1..c_{s+1}` and the strictly lower
//! triangular coefficient array `a_{i+1,j}(0)`. The weight row `b_j` is kept
//! as row `s+1` of the array (`a_{s+1,j}(0) := b_j`), so stage updates
//! iterate rows `2..s+1` uniformly.

use std::fmt;

use thiserror::Error;

/// Scheme labels accepted by [`registry_get`].
pub const REGISTRY_NAMES: [&str; 6] = ["IF1", "Heun2", "Ralston2", "Heun3", "Ralston3", "Kutta4"];

#[derive(Debug, Error)]
pub enum TableauError {
    #[error("unknown scheme `{name}`; valid schemes: IF1, Heun2, Ralston2, Heun3, Ralston3, Kutta4")]
    UnknownScheme { name: String },
}

/// An explicit Runge-Kutta tableau with `s` internal stages.
///
/// Abscissas satisfy `c_1 = 0` and `c_{s+1} = 1`; the coefficient array is
/// `(s+1) x (s+1)` strictly lower triangular with row `s+1` holding the
/// weights `b_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    name: String,
    s: usize,
    /// `c[i]` is the abscissa `c_{i+1}` (zero-based storage).
    c: Vec<f64>,
    /// Row-major `(s+1) x (s+1)`; `a0[r * (s+1) + k]` is `a_{r+1,k+1}(0)`.
    a0: Vec<f64>,
}

impl ButcherTableau {
    /// Builds a tableau from the stage count, abscissas `c_1..c_{s+1}` and
    /// coefficient rows. `rows[i-1]` holds `a_{i+1,1..i}(0)` for `1 <= i < s`
    /// and `rows[s-1]` holds the weights `b_1..b_s`.
    pub fn new(name: &str, c: Vec<f64>, rows: Vec<Vec<f64>>) -> Self {
        let s = c.len() - 1;
        assert!(s >= 1, "tableau needs at least one stage");
        assert_eq!(rows.len(), s, "expected {s} coefficient rows");
        let n = s + 1;
        let mut a0 = vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            assert!(
                row.len() <= i + 1 || i + 1 == s,
                "row {} of `{}` extends past the triangular part",
                i + 2,
                name
            );
            for (k, &v) in row.iter().enumerate() {
                a0[(i + 1) * n + k] = v;
            }
        }
        Self { name: name.to_string(), s, c, a0 }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of internal stages `s`.
    pub fn stages(&self) -> usize {
        self.s
    }

    /// Formal order of the underlying method (stage count for the schemes in
    /// the registry).
    pub fn order(&self) -> usize {
        self.s
    }

    /// Abscissa `c_i` for `1 <= i <= s+1`.
    pub fn c(&self, i: usize) -> f64 {
        assert!(
            (1..=self.s + 1).contains(&i),
            "abscissa index {i} out of range 1..={}",
            self.s + 1
        );
        self.c[i - 1]
    }

    /// Coefficient `a_{i+1,j}(0)` for `1 <= j <= i <= s`. Row `i = s` is the
    /// weight row `b_j`.
    pub fn a(&self, i: usize, j: usize) -> f64 {
        assert!(
            1 <= j && j <= i && i <= self.s,
            "coefficient index ({i},{j}) outside the lower triangle 1 <= j <= i <= {}",
            self.s
        );
        self.a0[i * (self.s + 1) + (j - 1)]
    }

    /// Weight `b_j = a_{s+1,j}(0)`.
    pub fn b(&self, j: usize) -> f64 {
        self.a(self.s, j)
    }
}

impl fmt::Display for ButcherTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (1..=self.s)
            .map(|i| (1..=i).map(|j| format!("{:.6}", self.a(i, j))).collect())
            .collect();
        let cw = cells
            .iter()
            .flatten()
            .map(|s| s.len())
            .max()
            .unwrap_or(1);
        writeln!(f, "{}:", self.name)?;
        for i in 1..=self.s + 1 {
            if i == self.s + 1 {
                writeln!(f, "{:-<8}+{:-<width$}", "", "", width = (cw + 1) * self.s)?;
                write!(f, "{:8}|", "")?;
                for j in 1..=self.s {
                    write!(f, " {:>cw$}", cells[self.s - 1][j - 1])?;
                }
                writeln!(f)?;
            } else {
                write!(f, "{:>8}|", format!("{:.6}", self.c(i)))?;
                if i > 1 {
                    for j in 1..i {
                        write!(f, " {:>cw$}", cells[i - 2][j - 1])?;
                    }
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Looks up one of the built-in tableaus by label.
pub fn registry_get(name: &str) -> Result<ButcherTableau, TableauError> {
    let key = name.to_ascii_lowercase();
    let t = match key.as_str() {
        "if1" => ButcherTableau::new("IF1", vec![0.0, 1.0], vec![vec![1.0]]),
        "heun2" => ButcherTableau::new(
            "Heun2",
            vec![0.0, 1.0, 1.0],
            vec![vec![1.0], vec![0.5, 0.5]],
        ),
        "ralston2" => ButcherTableau::new(
            "Ralston2",
            vec![0.0, 2.0 / 3.0, 1.0],
            vec![vec![2.0 / 3.0], vec![0.25, 0.75]],
        ),
        "heun3" => ButcherTableau::new(
            "Heun3",
            vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0],
            vec![
                vec![1.0 / 3.0],
                vec![0.0, 2.0 / 3.0],
                vec![0.25, 0.0, 0.75],
            ],
        ),
        "ralston3" => ButcherTableau::new(
            "Ralston3",
            vec![0.0, 0.5, 0.75, 1.0],
            vec![
                vec![0.5],
                vec![0.0, 0.75],
                vec![2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0],
            ],
        ),
        "kutta4" => ButcherTableau::new(
            "Kutta4",
            vec![0.0, 0.5, 0.5, 1.0, 1.0],
            vec![
                vec![0.5],
                vec![0.0, 0.5],
                vec![0.0, 0.0, 1.0],
                vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            ],
        ),
        _ => return Err(TableauError::UnknownScheme { name: name.to_string() }),
    };
    Ok(t)
}

/// All registry tableaus, in a fixed order.
pub fn registry_all() -> Vec<ButcherTableau> {
    REGISTRY_NAMES
        .iter()
        .map(|n| registry_get(n).expect("registry name"))
        .collect()
}

/// One failed structural check, with the offending 1-based row.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationFailure {
    pub row: usize,
    pub what: String,
}

/// Outcome of [`validate`]: either all structural conditions hold or a list
/// of failures with row indices.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Tolerance for the row-sum consistency check. The printed fractions are
/// either exact in binary or round once, so one ulp-scale slack suffices.
pub const ROW_SUM_TOL: f64 = 1e-14;

/// Checks the structural conditions assumed of an underlying explicit
/// Runge-Kutta method: endpoint abscissas, row sums equal to abscissas and
/// nonzero sub-diagonal coefficients.
pub fn validate(t: &ButcherTableau) -> ValidationReport {
    let mut failures = Vec::new();
    let s = t.stages();
    if t.c(1) != 0.0 {
        failures.push(ValidationFailure { row: 1, what: format!("c_1 = {} != 0", t.c(1)) });
    }
    if t.c(s + 1) != 1.0 {
        failures.push(ValidationFailure {
            row: s + 1,
            what: format!("c_{} = {} != 1", s + 1, t.c(s + 1)),
        });
    }
    for i in 1..=s {
        let sum: f64 = (1..=i).map(|j| t.a(i, j)).sum();
        if (sum - t.c(i + 1)).abs() > ROW_SUM_TOL {
            failures.push(ValidationFailure {
                row: i + 1,
                what: format!("row sum {} != c_{} = {}", sum, i + 1, t.c(i + 1)),
            });
        }
        if t.a(i, i) == 0.0 {
            failures.push(ValidationFailure {
                row: i + 1,
                what: format!("sub-diagonal coefficient a_{},{} is zero", i + 1, i),
            });
        }
    }
    ValidationReport { failures }
}
