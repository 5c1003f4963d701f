//! Small-`a` expansion of hit-and-miss probabilities for Boolean models with
//! ball grains.
//!
//! For a white set `S`, `P(aS ⊆ Zᶜ) = P^S · v(a)ᵀ + O(a⁴)` where `P^S` holds
//! the hull functionals of `S` and `v(a)` depends only on the grid width and
//! the grain law. Inclusion–exclusion over the black points turns the `P`
//! rows into the hit-and-miss rows `Q = M P`.

use crate::error::{Error, Result};
use crate::geometry::VertexSet;
use crate::lattice::{ClassTable, EMPTY_CLASS, NUM_CLASSES, NUM_PROPER_CLASSES};
use crate::scalar::Scalar;
use crate::weights::WeightVector;

/// Width of the expansion basis.
pub const BASIS_LEN: usize = 8;

pub type Row<T> = [T; BASIS_LEN];

/// Law of the grain radius. Only a.s. bounded laws with a positive lower
/// bound are supported.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadiusLaw<T> {
    Constant(T),
    Uniform { min: T, max: T },
}

impl<T: Scalar> RadiusLaw<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RadiusLaw::Constant(r) if r > T::zero() && r.is_finite() => Ok(()),
            RadiusLaw::Uniform { min, max } if min > T::zero() && max > min && max.is_finite() => Ok(()),
            _ => Err(Error::InvalidParameter(format!(
                "radius law {self:?} needs a positive, finite lower bound and max > min"
            ))),
        }
    }

    /// `E r^k`.
    pub fn moment(&self, k: i32) -> T {
        match *self {
            RadiusLaw::Constant(r) => r.powi(k),
            RadiusLaw::Uniform { min, max } => {
                let k1 = T::from_int(i64::from(k) + 1);
                (max.powi(k + 1) - min.powi(k + 1)) / (k1 * (max - min))
            }
        }
    }

    pub fn max_radius(&self) -> T {
        match *self {
            RadiusLaw::Constant(r) => r,
            RadiusLaw::Uniform { max, .. } => max,
        }
    }

    pub fn min_radius(&self) -> T {
        match *self {
            RadiusLaw::Constant(r) => r,
            RadiusLaw::Uniform { min, .. } => min,
        }
    }
}

/// Intensity and radius law of a stationary Boolean model of balls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallModel<T> {
    pub gamma: T,
    pub radius: RadiusLaw<T>,
}

impl<T: Scalar> BallModel<T> {
    pub fn new(gamma: T, radius: RadiusLaw<T>) -> Result<Self> {
        if !(gamma >= T::zero() && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("intensity {gamma} must be finite and ≥ 0")));
        }
        radius.validate()?;
        Ok(BallModel { gamma, radius })
    }

    /// Mean grain volume `(4/3) π E r³`.
    pub fn mean_volume(&self) -> T {
        T::lit(4.0) / T::lit(3.0) * T::PI() * self.radius.moment(3)
    }

    /// Void probability `e^{−γ E V_3(K)}`.
    pub fn void_probability(&self) -> T {
        (-self.gamma * self.mean_volume()).exp()
    }

    /// Specific intrinsic volumes `[V̄_0, V̄_1, V̄_2, V̄_3]` from the Miles
    /// formulas, with `V_0 = 1, V_1 = 4r, V_2 = 2πr², V_3 = (4/3)πr³`.
    pub fn miles_values(&self) -> [T; 4] {
        let g = self.gamma;
        let pi = T::PI();
        let e = self.void_probability();
        let ev1 = T::lit(4.0) * self.radius.moment(1);
        let ev2 = T::lit(2.0) * pi * self.radius.moment(2);
        let v3 = T::one() - e;
        let v2 = e * g * ev2;
        let v1 = e * (g * ev1 - g * g * pi / T::lit(8.0) * ev2 * ev2);
        let v0 = e
            * (g - g * g / T::lit(2.0) * ev2 * ev1 + g * g * g * pi / T::lit(48.0) * ev2 * ev2 * ev2);
        [v0, v1, v2, v3]
    }

    /// The expansion basis `v(a)`.
    pub fn v_of_a(&self, a: T) -> Row<T> {
        let g = self.gamma;
        let pi = T::PI();
        let er = self.radius.moment(1);
        let er2 = self.radius.moment(2);
        let e = self.void_probability();
        let two = T::lit(2.0);
        [
            T::one(),
            e,
            -a * g * er2 * pi * e,
            -a * a * g * two * er * e,
            a * a * g * g * pi * pi * er2 * er2 / two * e,
            -a * a * a * g * e,
            a * a * a * g * g * two * pi * er * er2 * e,
            -a * a * a * g * g * g / T::lit(6.0) * pi * pi * pi * er2 * er2 * er2 * e,
        ]
    }
}

/// Miles targets: `V̄_q = a^{q−3} v(a) · b_q`.
pub fn b_target<T: Scalar>(q: usize) -> Row<T> {
    let z = T::zero();
    let two = T::lit(2.0);
    let pi = T::PI();
    match q {
        3 => [T::one(), -T::one(), z, z, z, z, z, z],
        2 => [z, z, -two, z, z, z, z, z],
        1 => [z, z, z, -two, -pi, z, z, z],
        0 => [z, z, z, z, z, -T::one(), -two, -pi],
        _ => panic!("no Miles target for q = {q}"),
    }
}

pub fn dot<T: Scalar>(a: &Row<T>, b: &Row<T>) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// `P`, `Q = M P` and `D` for all classes.
#[derive(Clone, Debug)]
pub struct ExpansionTables<T> {
    p: [Row<T>; NUM_PROPER_CLASSES],
    q: [Row<T>; NUM_CLASSES],
    sizes: [u32; NUM_CLASSES],
}

impl<T: Scalar> ExpansionTables<T> {
    pub fn build(table: &ClassTable) -> Self {
        let mut p = [[T::zero(); BASIS_LEN]; NUM_PROPER_CLASSES];
        for (j, row) in p.iter_mut().enumerate() {
            let white = table
                .representative(j + 1)
                .white()
                .expect("classes 1..=21 have white points");
            *row = p_row_of(white);
        }

        // Row for the empty white set: avoiding ∅ has probability one.
        let mut empty = [T::zero(); BASIS_LEN];
        empty[0] = T::one();

        let mut q = [[T::zero(); BASIS_LEN]; NUM_CLASSES];
        for (i, qrow) in q.iter_mut().enumerate() {
            let coeffs = table.inclusion_exclusion_row(table.representative(i + 1));
            for (j, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let source = if j + 1 == EMPTY_CLASS { &empty } else { &p[j] };
                let c = T::from_int(i64::from(c));
                for k in 0..BASIS_LEN {
                    qrow[k] += c * source[k];
                }
            }
        }

        ExpansionTables {
            p,
            q,
            sizes: *table.class_sizes(),
        }
    }

    /// `P^j` for `j = 1..=21`.
    pub fn p_row(&self, class: usize) -> &Row<T> {
        &self.p[class - 1]
    }

    /// `Q^j` for `j = 1..=22`. Row 22 belongs to the all-black configuration
    /// and is outside the 21-row matrix `Q`.
    pub fn q_row(&self, class: usize) -> &Row<T> {
        &self.q[class - 1]
    }

    /// The 21×8 matrix `Q`.
    pub fn q_matrix(&self) -> &[Row<T>] {
        &self.q[..NUM_PROPER_CLASSES]
    }

    /// `|η_j|`, `j = 1..=22`.
    pub fn class_size(&self, class: usize) -> u32 {
        self.sizes[class - 1]
    }

    /// `(c_1, c_2, c_3) = (−Q_3/2, −Q_4/2, Q_5/4)`.
    pub fn c_constants(&self, class: usize) -> (T, T, T) {
        let q = self.q_row(class);
        let two = T::lit(2.0);
        (-q[2] / two, -q[3] / two, q[4] / T::lit(4.0))
    }

    /// `Σ_j w_j |η_j| Q^j` over all 22 classes. With `w_22 = 0` this is `w D Q`.
    pub fn wdq(&self, w: &[T; NUM_CLASSES]) -> Row<T> {
        let mut out = [T::zero(); BASIS_LEN];
        for (j, &wj) in w.iter().enumerate() {
            if wj == T::zero() {
                continue;
            }
            let scale = wj * T::from_int(i64::from(self.sizes[j]));
            for k in 0..BASIS_LEN {
                out[k] += scale * self.q[j][k];
            }
        }
        out
    }

    /// `Q^j · v(a)ᵀ` without range checking.
    pub fn hit_miss_expansion(&self, class: usize, model: &BallModel<T>, a: T) -> T {
        dot(self.q_row(class), &model.v_of_a(a))
    }

    /// Third-order prediction of `P(aB_j ⊆ Z, aW_j ⊆ Zᶜ)`; errors when the
    /// truncated value is not a probability.
    pub fn predict_hit_miss(&self, class: usize, model: &BallModel<T>, a: T) -> Result<T> {
        let value = self.hit_miss_expansion(class, model, a);
        let slack = T::lit(64.0) * T::epsilon();
        if value < -slack || value > T::one() + slack {
            return Err(Error::OutOfRange {
                class,
                a: a.as_f64(),
                value: value.as_f64(),
            });
        }
        Ok(value)
    }

    /// Predicted mean `a^{q−3} · w D Q · v(a)ᵀ` of the local estimator.
    pub fn predict_estimator_mean(&self, w: &WeightVector<T>, model: &BallModel<T>, a: T) -> T {
        let row = self.wdq(w.values());
        a.powi(w.q() as i32 - 3) * dot(&row, &model.v_of_a(a))
    }
}

/// `P^S = (0, 1, V_1, V_2, V_1², V_3 − π V_1^(3), V_1 V_2, V_1³)` for a white set.
pub fn p_row_of<T: Scalar>(white: VertexSet) -> Row<T> {
    let hull = white.hull();
    let v1: T = hull.v1();
    let v2: T = hull.v2();
    let v3: T = hull.v3();
    let v13: T = hull.power_volume_v13();
    [
        T::zero(),
        T::one(),
        v1,
        v2,
        v1 * v1,
        v3 - T::PI() * v13,
        v1 * v2,
        v1 * v1 * v1,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn tables() -> ExpansionTables<f64> {
        ExpansionTables::build(ClassTable::shared())
    }

    fn unit_model() -> BallModel<f64> {
        BallModel::new(0.1, RadiusLaw::Constant(1.0)).unwrap()
    }

    #[test]
    fn p_rows() {
        let t = tables();
        let p1 = t.p_row(1);
        let expected = [0.0, 1.0, 3.0, 3.0, 9.0, 1.0 - PI / 8.0, 9.0, 27.0];
        for k in 0..8 {
            assert_abs_diff_eq!(p1[k], expected[k], epsilon = 1e-12);
        }
        assert_eq!(t.p_row(21), &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let p9 = t.p_row(9);
        let expected = [0.0, 1.0, 2.0, 1.0, 4.0, -PI / 12.0, 2.0, 8.0];
        for k in 0..8 {
            assert_abs_diff_eq!(p9[k], expected[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn q_first_row_equals_p_first_row() {
        let t = tables();
        assert_eq!(t.q_row(1), t.p_row(1));
    }

    #[test]
    fn q_constant_columns() {
        // columns 1 and 2 of Q = M P follow from P_1 = 0, P_2 = 1 and the
        // row sums of M; the all-black row carries the S = ∅ term
        let t = tables();
        for j in 1..=21 {
            assert_eq!(t.q_row(j)[0], 0.0);
            assert_eq!(t.q_row(j)[1], if j == 1 { 1.0 } else { 0.0 });
        }
        assert_eq!(t.q_row(EMPTY_CLASS)[0], 1.0);
        assert_eq!(t.q_row(EMPTY_CLASS)[1], -1.0);
    }

    #[test]
    fn v_at_zero() {
        let m = unit_model();
        let v = m.v_of_a(0.0);
        assert_eq!(v[0], 1.0);
        assert_abs_diff_eq!(v[1], 0.657784, epsilon = 1e-6);
        assert!(v[2..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn v_component_examples() {
        let m = unit_model();
        let v = m.v_of_a(0.1);
        assert_abs_diff_eq!(v[2], -0.1 * 0.1 * PI * (-0.4 * PI / 3.0f64 * 1.0).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(v[2], -0.0206649, epsilon = 1e-7);
        for a in [1e-3, 0.1, 1.0, 7.0] {
            assert!(m.v_of_a(a)[7] < 0.0);
        }
    }

    #[test]
    fn v_homogeneity_in_a() {
        let m = BallModel::new(0.3, RadiusLaw::Uniform { min: 0.5, max: 2.0 }).unwrap();
        let full = m.v_of_a(0.2);
        let half = m.v_of_a(0.1);
        let factors = [1.0, 1.0, 0.5, 0.25, 0.25, 0.125, 0.125, 0.125];
        for k in 0..8 {
            assert_abs_diff_eq!(half[k], full[k] * factors[k], epsilon = 1e-15);
        }
    }

    #[test]
    fn miles_examples() {
        let v = unit_model().miles_values();
        assert_abs_diff_eq!(v[3], 1.0 - (-0.418879f64).exp(), epsilon = 1e-6);
        assert_abs_diff_eq!(v[3], 0.342216, epsilon = 1e-6);
        assert_abs_diff_eq!(v[2], 0.413298, epsilon = 1e-6);
        assert_abs_diff_eq!(v[1], 0.161137, epsilon = 1e-6);
        assert_abs_diff_eq!(v[0], -0.006202, epsilon = 1e-6);
        let empty = BallModel::new(0.0, RadiusLaw::Constant(1.0)).unwrap().miles_values();
        assert!(empty.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn miles_equals_b_dot_v() {
        let m = BallModel::new(0.25, RadiusLaw::Uniform { min: 0.5, max: 1.5 }).unwrap();
        let miles = m.miles_values();
        for a in [0.05f64, 0.3] {
            let v = m.v_of_a(a);
            for q in 0..4 {
                let via_b = a.powi(q as i32 - 3) * dot(&b_target(q), &v);
                assert_abs_diff_eq!(via_b, miles[q], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn uniform_moments() {
        let law = RadiusLaw::Uniform { min: 1.0, max: 3.0 };
        assert_abs_diff_eq!(law.moment(1), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(law.moment(2), 13.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(law.moment(3), 10.0, epsilon = 1e-14);
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert!(BallModel::new(-0.1, RadiusLaw::Constant(1.0)).is_err());
        assert!(BallModel::new(0.1, RadiusLaw::Constant(0.0)).is_err());
        assert!(BallModel::new(0.1, RadiusLaw::Uniform { min: 0.0, max: 1.0 }).is_err());
        assert!(BallModel::new(0.1, RadiusLaw::Uniform { min: 2.0, max: 1.0 }).is_err());
    }

    #[test]
    fn hit_miss_at_zero_width() {
        let t = tables();
        let m = unit_model();
        assert_abs_diff_eq!(t.predict_hit_miss(1, &m, 0.0).unwrap(), m.void_probability(), epsilon = 1e-15);
        assert_eq!(t.predict_hit_miss(21, &m, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn out_of_range_prediction_is_signalled() {
        let t = tables();
        let m = BallModel::new(2.0, RadiusLaw::Constant(1.0)).unwrap();
        let bad = (1..=21).find(|&j| t.predict_hit_miss(j, &m, 3.0).is_err());
        assert!(bad.is_some());
        assert!(matches!(t.predict_hit_miss(bad.unwrap(), &m, 3.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn c_constants_first_class() {
        let (c1, c2, c3) = tables().c_constants(1);
        assert_abs_diff_eq!(c1, -1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c2, -1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c3, 2.25, epsilon = 1e-12);
    }

    #[test]
    fn single_precision_tables_agree() {
        let t64 = tables();
        let t32: ExpansionTables<f32> = ExpansionTables::build(ClassTable::shared());
        for j in 1..=22 {
            for k in 0..8 {
                let a = t64.q_row(j)[k];
                let b = t32.q_row(j)[k] as f64;
                assert!((a - b).abs() <= 1e-4 * a.abs().max(1.0), "Q[{j}][{k}] {a} vs {b}");
            }
        }
    }
}
