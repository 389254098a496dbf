//! Jacobian of the trilinear map from the reference cube onto a hexahedron.

use crate::template::UNIT_CUBE;

/// Samples per axis of the validity grid.
pub const GRID: usize = 5;

/// Jacobian determinant at reference coordinates `t` in `[0,1]^3`; `corners`
/// are the images of the template labels 1..=8.
pub fn trilinear_jacobian(corners: &[[f64; 3]; 8], t: [f64; 3]) -> f64 {
    let mut d = [[0.0; 3]; 3];
    for (l, c) in UNIT_CUBE.iter().enumerate() {
        let f: [f64; 3] = std::array::from_fn(|k| if c[k] == 1 { t[k] } else { 1.0 - t[k] });
        for axis in 0..3 {
            let sign = if c[axis] == 1 { 1.0 } else { -1.0 };
            let w = sign * f.iter().enumerate().filter(|&(k, _)| k != axis).map(|(_, v)| v).product::<f64>();
            for i in 0..3 {
                d[axis][i] += w * corners[l][i];
            }
        }
    }
    d[0][0] * (d[1][1] * d[2][2] - d[1][2] * d[2][1]) - d[0][1] * (d[1][0] * d[2][2] - d[1][2] * d[2][0])
        + d[0][2] * (d[1][0] * d[2][1] - d[1][1] * d[2][0])
}

/// Weaker stand-in for an exact validity test: positive Jacobian at the eight
/// corners and on a `GRID`^3 sample lattice (which contains the corners).
pub fn validity_proxy(corners: &[[f64; 3]; 8]) -> bool {
    let step = 1.0 / (GRID - 1) as f64;
    (0..GRID * GRID * GRID).all(|i| {
        let t = [(i % GRID) as f64 * step, (i / GRID % GRID) as f64 * step, (i / (GRID * GRID)) as f64 * step];
        trilinear_jacobian(corners, t) > 0.0
    })
}
