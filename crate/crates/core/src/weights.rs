//! Class weights of local estimators: checking and solving `w D Q = b_q`,
//! and a plain-text file format.
//!
//! Weight files hold one `class_id,weight` pair per line for classes
//! `1..=22`; blank lines, lines starting with `#` and a `class_id,weight`
//! header row are ignored.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::expansion::{b_target, ExpansionTables, Row, BASIS_LEN};
use crate::lattice::{ClassTable, EMPTY_CLASS, NUM_CLASSES};
use crate::scalar::Scalar;

/// Weights `w_1..w_22` of an estimator for `V̄_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector<T> {
    q: usize,
    w: [T; NUM_CLASSES],
}

impl<T: Scalar> WeightVector<T> {
    pub fn new(q: usize, w: [T; NUM_CLASSES]) -> Result<Self> {
        if q > 3 {
            return Err(Error::InvalidParameter(format!("q = {q} is not in 0..=3")));
        }
        Ok(WeightVector { q, w })
    }

    pub fn zeros(q: usize) -> Result<Self> {
        Self::new(q, [T::zero(); NUM_CLASSES])
    }

    /// Lattice-point counting on 2×2×2 windows: each window contributes the
    /// fraction of its vertices that are black, `w_j = |B_j| / 8`.
    pub fn volume() -> Self {
        let table = ClassTable::shared();
        let mut w = [T::zero(); NUM_CLASSES];
        for (j, slot) in w.iter_mut().enumerate() {
            let black = 8 - table.representative(j + 1).white_count();
            *slot = T::from_int(black as i64) / T::lit(8.0);
        }
        WeightVector { q: 3, w }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn values(&self) -> &[T; NUM_CLASSES] {
        &self.w
    }

    /// Weight of class `j`, `1 ≤ j ≤ 22`.
    pub fn get(&self, class: usize) -> T {
        self.w[class - 1]
    }

    /// `w D Q` (row 22 of the extended `Q` enters when `w_22 ≠ 0`).
    pub fn wdq_row(&self, tables: &ExpansionTables<T>) -> Row<T> {
        tables.wdq(&self.w)
    }

    /// `w D Q − b_q`; zero exactly for estimators whose expansion matches
    /// the Miles formula through third order.
    pub fn residual(&self, tables: &ExpansionTables<T>) -> Row<T> {
        let row = self.wdq_row(tables);
        let b = b_target::<T>(self.q);
        let mut out = [T::zero(); BASIS_LEN];
        for k in 0..BASIS_LEN {
            out[k] = row[k] - b[k];
        }
        out
    }
}

impl WeightVector<f64> {
    pub fn to_text(&self) -> String {
        let mut s = format!("# class_id,weight for q = {}\n", self.q);
        for (j, w) in self.w.iter().enumerate() {
            // Display for f64 is the shortest representation that round-trips
            writeln!(s, "{},{}", j + 1, w).unwrap();
        }
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>, q: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::new(q, parse_weights(&text)?)
    }
}

pub fn parse_weights(text: &str) -> Result<[f64; NUM_CLASSES]> {
    let mut w = [None; NUM_CLASSES];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.replace(' ', "") == "class_id,weight" {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let mut fields = line.split(',').map(str::trim);
        let (Some(id), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(format!("expected `class_id,weight`, got `{line}`")));
        };
        let class: usize = id
            .parse()
            .map_err(|_| parse_err(format!("bad class id `{id}`")))?;
        if !(1..=NUM_CLASSES).contains(&class) {
            return Err(parse_err(format!("class id {class} outside 1..={NUM_CLASSES}")));
        }
        let value: f64 = value
            .parse()
            .map_err(|_| parse_err(format!("bad weight `{value}`")))?;
        if !value.is_finite() {
            return Err(parse_err(format!("weight `{value}` is not finite")));
        }
        if w[class - 1].replace(value).is_some() {
            return Err(parse_err(format!("class {class} listed twice")));
        }
    }
    let mut out = [0.0; NUM_CLASSES];
    for (j, v) in w.iter().enumerate() {
        out[j] = v.ok_or(Error::MissingClass(j + 1))?;
    }
    Ok(out)
}

/// Residual tolerance above which a least-squares solution counts as
/// infeasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Classes that may carry weight for `q < 3`: `w_1 = w_22 = 0` is pinned.
pub fn default_support() -> Vec<usize> {
    (2..EMPTY_CLASS).collect()
}

fn check_support(support: &[usize]) -> Result<()> {
    for &j in support {
        if j <= 1 || j >= EMPTY_CLASS {
            return Err(Error::InvalidParameter(format!(
                "class {j} cannot be in the support; w_1 and w_22 are pinned to zero"
            )));
        }
    }
    Ok(())
}

/// Matrix of the six nontrivial equations (columns 3..=8 of `w D Q = b_q`)
/// restricted to `support`.
pub fn system_matrix(tables: &ExpansionTables<f64>, support: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(BASIS_LEN - 2, support.len(), |r, c| {
        let j = support[c];
        f64::from(tables.class_size(j)) * tables.q_row(j)[r + 2]
    })
}

fn rank_tol(a: &DMatrix<f64>) -> f64 {
    1e-10 * a.amax().max(1.0)
}

/// Rank of the weight system on `support`.
pub fn system_rank(tables: &ExpansionTables<f64>, support: &[usize]) -> usize {
    let a = system_matrix(tables, support);
    let tol = rank_tol(&a);
    a.svd(false, false).rank(tol)
}

/// Minimum-norm weights with `w D Q = b_q` on the given support (defaults to
/// classes 2..=21), computed from the singular value decomposition.
pub fn solve_weights(
    tables: &ExpansionTables<f64>,
    q: usize,
    support: Option<&[usize]>,
) -> Result<WeightVector<f64>> {
    if q > 2 {
        return Err(Error::InvalidParameter(format!(
            "solve handles q in 0..=2, got {q}; the volume estimator is point counting"
        )));
    }
    solve_for_target(tables, q, &b_target(q), support)
}

/// As [`solve_weights`] but for an arbitrary right-hand side; columns 1 and 2
/// of `target` are ignored since `w_1 = w_22 = 0` forces them to zero.
pub fn solve_for_target(
    tables: &ExpansionTables<f64>,
    q: usize,
    target: &Row<f64>,
    support: Option<&[usize]>,
) -> Result<WeightVector<f64>> {
    let owned;
    let support = match support {
        Some(s) => s,
        None => {
            owned = default_support();
            &owned
        }
    };
    check_support(support)?;
    let rhs = DVector::from_iterator(BASIS_LEN - 2, target[2..].iter().copied());
    if support.is_empty() {
        return Err(Error::Infeasible {
            residual: rhs.amax(),
        });
    }

    let a = system_matrix(tables, support);
    let tol = rank_tol(&a);
    let x = a
        .clone()
        .svd(true, true)
        .solve(&rhs, tol)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let residual = (&a * &x - &rhs).amax();
    if residual > FEASIBILITY_TOL {
        return Err(Error::Infeasible { residual });
    }
    let mut w = [0.0; NUM_CLASSES];
    for (c, &j) in support.iter().enumerate() {
        w[j - 1] = x[c];
    }
    WeightVector::new(q, w)
}

/// Orthonormal basis of `{h : h D Q = 0, h_1 = h_22 = 0}` on the support.
pub fn homogeneous_basis(tables: &ExpansionTables<f64>, support: &[usize]) -> Vec<[f64; NUM_CLASSES]> {
    let a = system_matrix(tables, support);
    let tol = rank_tol(&a);
    // pad to a square matrix so the SVD returns a full V
    let n = support.len();
    let mut padded = DMatrix::zeros(n.max(a.nrows()), n);
    padded.rows_mut(0, a.nrows()).copy_from(&a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    (0..n)
        .filter(|&r| svd.singular_values[r] <= tol)
        .map(|r| {
            let mut h = [0.0; NUM_CLASSES];
            for (c, &j) in support.iter().enumerate() {
                h[j - 1] = v_t[(r, c)];
            }
            h
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables() -> ExpansionTables<f64> {
        ExpansionTables::build(ClassTable::shared())
    }

    #[test]
    fn zero_weights_give_minus_b() {
        let t = tables();
        for q in 0..3 {
            let r = WeightVector::<f64>::zeros(q).unwrap().residual(&t);
            assert_eq!(r, b_target::<f64>(q).map(|x| -x));
        }
    }

    #[test]
    fn solve_q2_full_support() {
        let t = tables();
        let w = solve_weights(&t, 2, None).unwrap();
        assert_eq!(w.get(1), 0.0);
        assert_eq!(w.get(22), 0.0);
        assert!(w.residual(&t).iter().all(|r| r.abs() <= 1e-10));
    }

    #[test]
    fn single_flat_class_is_infeasible() {
        let t = tables();
        assert!(matches!(solve_weights(&t, 2, Some(&[4])), Err(Error::Infeasible { .. })));
        assert!(matches!(solve_weights(&t, 1, Some(&[9])), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn pinned_classes_cannot_be_supported() {
        let t = tables();
        assert!(matches!(solve_weights(&t, 2, Some(&[1, 2])), Err(Error::InvalidParameter(_))));
        assert!(matches!(solve_weights(&t, 2, Some(&[22])), Err(Error::InvalidParameter(_))));
        assert!(solve_weights(&t, 3, None).is_err());
    }

    #[test]
    fn custom_target() {
        let t = tables();
        let mut target = b_target::<f64>(1);
        target[3] = -1.5;
        let w = solve_for_target(&t, 1, &target, None).unwrap();
        let r = w.residual(&t);
        assert!((r[3] - 0.5).abs() < 1e-10);
        assert!(r.iter().enumerate().all(|(k, x)| k == 3 || x.abs() < 1e-10));
    }

    #[test]
    fn solve_is_deterministic() {
        let t = tables();
        let support = [2, 9, 11, 17, 20, 21];
        let a = solve_weights(&t, 1, Some(&support)).unwrap();
        let b = solve_weights(&t, 1, Some(&support)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn volume_weights() {
        let w = WeightVector::<f64>::volume();
        assert_eq!(w.get(1), 0.0);
        assert_eq!(w.get(2), 1.0 / 8.0);
        assert_eq!(w.get(21), 7.0 / 8.0);
        assert_eq!(w.get(22), 1.0);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let mut text = String::from("# header\n");
        for j in 1..=21 {
            text.push_str(&format!("{j},0.5\n"));
        }
        assert!(matches!(parse_weights(&text), Err(Error::MissingClass(22))));

        let bad = format!("{text}23,1.0\n");
        match parse_weights(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 23),
            other => panic!("unexpected {other:?}"),
        }

        let dup = format!("{text}5,1.0\n");
        assert!(matches!(parse_weights(&dup), Err(Error::Parse { line: 23, .. })));
        assert!(matches!(parse_weights("1;2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_weights("1,abc\n"), Err(Error::Parse { line: 1, .. })));
        let with_header = format!("class_id,weight\n{text}22,0\n");
        assert!(parse_weights(&with_header).is_ok());
    }

    #[test]
    fn text_round_trip() {
        let mut w = [0.0; NUM_CLASSES];
        for (j, x) in w.iter_mut().enumerate() {
            *x = (j as f64 + 0.1).sqrt() * if j % 2 == 0 { 1.0 } else { -1e-7 };
        }
        let wv = WeightVector::new(1, w).unwrap();
        let back = parse_weights(&wv.to_text()).unwrap();
        assert_eq!(back, w);
    }
}
