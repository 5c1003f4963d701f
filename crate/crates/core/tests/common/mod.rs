//! Published reference values used as golden fixtures.
#![allow(dead_code)]

use std::f64::consts::PI;

pub fn xi() -> f64 {
    2f64.sqrt().atan() / (2.0 * PI)
}

/// Inclusion–exclusion matrix, rows and columns in class order 1..=21.
pub const M_TABLE: [[i32; 21]; 21] = [
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, -2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, -2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, -2, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-1, 3, -2, -1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-1, 3, -1, -1, -1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-1, 3, 0, -3, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, -4, 4, 2, 0, -4, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, -4, 3, 3, 0, -3, 0, -1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, -4, 3, 2, 1, -2, -2, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, -4, 2, 2, 2, 0, -4, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, -4, 0, 6, 0, 0, 0, -4, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, -4, 2, 3, 1, -1, -2, -1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [-1, 5, -3, -6, -1, 3, 3, 4, 0, -1, 0, 0, -1, -3, 1, 0, 0, 0, 0, 0, 0],
    [-1, 5, -4, -4, -2, 3, 6, 1, 0, 0, -2, -1, 0, -2, 0, 1, 0, 0, 0, 0, 0],
    [-1, 5, -5, -4, -1, 6, 3, 1, -1, -1, -2, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0],
    [1, -6, 6, 6, 3, -6, -12, -2, 0, 0, 6, 3, 0, 6, 0, -6, 0, 1, 0, 0, 0],
    [1, -6, 6, 7, 2, -8, -8, -4, 1, 2, 4, 1, 1, 6, -2, -2, -2, 0, 1, 0, 0],
    [1, -6, 7, 6, 2, -10, -8, -2, 2, 2, 6, 1, 0, 4, 0, -2, -4, 0, 0, 1, 0],
    [-1, 7, -9, -9, -3, 15, 15, 5, -3, -4, -12, -3, -1, -12, 3, 9, 9, -1, -3, -3, 1],
];

/// Multiplicities |η_j|, j = 1..=21.
pub const D_TABLE: [u32; 21] = [1, 8, 12, 12, 4, 24, 24, 8, 6, 8, 24, 6, 2, 24, 8, 24, 24, 4, 12, 12, 8];

/// `(V_3, V_2, V_1, 24 V_1^(3))` of the white set, j = 1..=21, closed forms.
pub fn geometry_table() -> [[f64; 4]; 21] {
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let x = xi();
    [
        [1.0, 3.0, 3.0, 3.0],
        [5.0 / 6.0, 9.0 / 4.0 + r3 / 4.0, 9.0 / 4.0 + 3.0 * r2 * x, 9.0 / 4.0 + 6.0 * r2 * x],
        [0.5, 1.5 + r2 / 2.0, 2.0 + r2 / 2.0, 2.0 + r2],
        [2.0 / 3.0, 1.5 + r3 / 2.0, 1.5 + 6.0 * r2 * x, 1.5 + 12.0 * r2 * x],
        [2.0 / 3.0, 1.5 + r3 / 2.0, 1.5 + 6.0 * r2 * x, 1.5 + 12.0 * r2 * x],
        [1.0 / 3.0, 1.0 + r2 / 2.0, 1.5 + r2 / 2.0 + r3 / 6.0, 1.5 + r2 + r3 / 2.0],
        [1.0 / 3.0, 0.75 + r2 / 2.0 + r3 / 4.0, 1.25 + r2 / 2.0 + 3.0 * r2 * x, 1.25 + r2 + 6.0 * r2 * x],
        [0.5, 0.75 + 3.0 * r3 / 4.0, 0.75 + 9.0 * r2 * x, 0.75 + 18.0 * r2 * x],
        [0.0, 1.0, 2.0, 2.0],
        [1.0 / 6.0, 0.75 + r3 / 4.0, 0.75 + 1.5 * r2 - 3.0 * r2 * x, 0.75 + 3.0 * r2 - 6.0 * r2 * x],
        [1.0 / 6.0, 0.5 + r2 / 2.0, 1.0 + r2 / 2.0 + r3 / 3.0, 1.0 + r2 + r3],
        [0.0, r2, 1.0 + r2, 1.0 + 2.0 * r2],
        [1.0 / 3.0, r3, 12.0 * r2 * x, 24.0 * r2 * x],
        [1.0 / 6.0, 0.25 + r2 / 2.0 + r3 / 4.0, 0.75 + r2 / 2.0 + r3 / 6.0 + 3.0 * r2 * x, 0.75 + r2 + r3 / 2.0 + 6.0 * r2 * x],
        [0.0, r3 / 2.0, 1.5 * r2, 3.0 * r2],
        [0.0, r2 / 2.0, 0.5 + r2 / 2.0 + r3 / 2.0, 0.5 + r2 + 1.5 * r3],
        [0.0, 0.5, 1.0 + r2 / 2.0, 1.0 + r2],
        [0.0, 0.0, r3, 3.0 * r3],
        [0.0, 0.0, r2, 2.0 * r2],
        [0.0, 0.0, 1.0, 1.0],
        [0.0, 0.0, 0.0, 0.0],
    ]
}

/// `(Q_3, Q_4, Q_6)` closed forms, j = 1..=21.
pub fn q_closed_forms() -> [[f64; 3]; 21] {
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let x = xi();
    let q6a = -(4.0 + PI * (-0.75 + 6.0 * r2 * x)) / 24.0;
    let q6b = -(4.0 + PI * (0.5 - 12.0 * r2 * x + r2)) / 24.0;
    let q6c = (4.0 - PI * (-0.25 - r2 + 6.0 * r2 * x + r3 / 2.0)) / 24.0;
    let q3a = -0.75 + 3.0 * r2 * x;
    let q3b = 0.5 - 6.0 * r2 * x + r2 / 2.0;
    let q3c = -0.25 - r2 / 2.0 + 3.0 * r2 * x + r3 / 6.0;
    [
        [3.0, 3.0, 1.0 - PI / 8.0],
        [q3a, (r3 - 3.0) / 4.0, q6a],
        [q3b, (r2 - r3) / 2.0, q6b],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [q3c, (1.0 - 2.0 * r2 + r3) / 4.0, q6c],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [1.0 - 2.0 * r3 / 3.0, 0.0, -1.0 / 3.0 - PI / 24.0 * (1.0 - 2.0 * r3)],
        [1.5 * r2 - 6.0 * r2 * x - r3 / 2.0, 0.0, -(4.0 + PI * (3.0 * r2 - 12.0 * r2 * x - 1.5 * r3)) / 24.0],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [q3c, (2.0 * r2 - r3 - 1.0) / 4.0, q6c],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [q3b, (r3 - r2) / 2.0, q6b],
        [q3a, (3.0 - r3) / 4.0, q6a],
    ]
}

/// Printed `Q_5`, j = 1..=21 (four significant figures).
pub const Q5_TABLE: [f64; 21] = [
    9.0, -0.6186, -0.4344, 0.02203, 0.02203, -0.06855, 0.0174, 0.0, -0.5580, -0.1267, 0.03245,
    0.01379, 0.0, 0.004902, 0.007310, 0.008850, 0.04284, 0.00328, 0.04898, 0.07429, 0.5730,
];

/// Optimal weights `(w^(2), w^(1), w^(0))` for classes 1..=22.
///
/// The printed η17 entry of `w^(0)` reads `-1.937`; the unique solution on
/// this support is `-0.19367`, so the decimal point is shifted.
pub const OPTIMAL_WEIGHTS: [[f64; 3]; 22] = [
    [0.0, 0.0, 0.0],
    [0.1777, 0.4789, 0.1535],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [2.2019, -0.3769, -0.3024],
    [0.0, 0.0, 0.0],
    [4.7430, 1.0450, -0.3830],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [0.5241, 0.0111, -0.1937],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [-1.4678, 0.5583, 0.2587],
    [1.1620, -0.7321, 0.0031],
    [0.0, 0.0, 0.0],
];

pub fn optimal_weights(q: usize) -> minkest::Weights {
    let col = 2 - q;
    let mut w = [0.0; 22];
    for (j, row) in OPTIMAL_WEIGHTS.iter().enumerate() {
        w[j] = row[col];
    }
    minkest::Weights::new(q, w).unwrap()
}

/// Per-component tolerance for a 4-decimal weight set against `b_q`.
pub fn weight_tolerance(b: f64) -> f64 {
    if b.abs() > 2.0 {
        6e-3
    } else {
        2e-3
    }
}

/// The η17 entry of `w^(0)` exactly as printed.
pub const PRINTED_W0_ETA17: f64 = -1.937;
