// SPDX-License-Identifier: Apache-2.0

//! Evolved Wigner function on quadrature grids. A point `(q, p)` of mode `j`
//! is the amplitude `α_j = (q + ip)/2`.

use std::io::Write;

use clap::ValueEnum;
use cvneg::phase_space::{evolved_wigner_point, lambda_params};
use cvneg::ChannelParams;
use num_complex::Complex64;

use crate::format::{write_csv, Cell};
use crate::sweep::linspace;
use crate::Failure;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slice {
    /// `(q₁, q₂)` plane at `p₁ = p₂ = 0`.
    Qq,
    /// `(p₁, p₂)` plane at `q₁ = q₂ = 0`.
    Pp,
    /// `(q₁, p₂)` plane at `p₁ = q₂ = 0`.
    Qp,
    /// Full four-dimensional grid.
    Full,
}

const HEADER: [&str; 5] = ["q1", "p1", "q2", "p2", "w"];

/// Rows `(q₁, p₁, q₂, p₂, W)` in row-major grid order.
pub fn grid(r: f64, ch: &ChannelParams, half_width: f64, points: usize, slice: Slice) -> Result<Vec<[f64; 5]>, Failure> {
    if !half_width.is_finite() || half_width <= 0.0 {
        return Err(Failure::Invalid(format!("invalid argument: half-width must be positive, got {half_width}")));
    }
    if points < 2 {
        return Err(Failure::Invalid(format!("invalid argument: points must be at least 2, got {points}")));
    }
    let params = lambda_params(r, ch)?;
    let axis = linspace(-half_width, half_width, points);
    let zero = [0.0];
    let (a, b, c, d): (&[f64], &[f64], &[f64], &[f64]) = match slice {
        Slice::Qq => (&axis, &zero, &axis, &zero),
        Slice::Pp => (&zero, &axis, &zero, &axis),
        Slice::Qp => (&axis, &zero, &zero, &axis),
        Slice::Full => (&axis, &axis, &axis, &axis),
    };
    let mut rows = Vec::with_capacity(a.len() * b.len() * c.len() * d.len());
    for &q1 in a {
        for &p1 in b {
            for &q2 in c {
                for &p2 in d {
                    let w = evolved_wigner_point(
                        &params,
                        Complex64::new(q1, p1) / 2.0,
                        Complex64::new(q2, p2) / 2.0,
                    );
                    rows.push([q1, p1, q2, p2, w]);
                }
            }
        }
    }
    Ok(rows)
}

pub fn write_csv_rows(rows: &[[f64; 5]], sink: &mut dyn Write) -> Result<(), Failure> {
    let cells: Vec<Vec<Cell>> = rows.iter().map(|row| row.iter().map(|&x| Cell::Num(x)).collect()).collect();
    write_csv(&HEADER, &cells, sink)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slices_have_expected_shape() {
        let ch = ChannelParams::identity();
        assert_eq!(grid(0.5, &ch, 1.0, 5, Slice::Qq).unwrap().len(), 25);
        assert_eq!(grid(0.5, &ch, 1.0, 3, Slice::Full).unwrap().len(), 81);
        let rows = grid(0.5, &ch, 1.0, 5, Slice::Pp).unwrap();
        assert!(rows.iter().all(|row| row[0] == 0.0 && row[2] == 0.0));
    }

    #[test]
    fn vacuum_peak_value() {
        // W(0, 0) = 1/π² for two vacuum modes
        let rows = grid(0.0, &ChannelParams::identity(), 1.0, 3, Slice::Qq).unwrap();
        let centre = rows.iter().find(|row| row[0] == 0.0 && row[2] == 0.0).unwrap();
        let expected = 1.0 / (std::f64::consts::PI * std::f64::consts::PI);
        assert!((centre[4] - expected).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_grid() {
        let ch = ChannelParams::identity();
        assert!(matches!(grid(0.5, &ch, 0.0, 5, Slice::Qq), Err(Failure::Invalid(_))));
        assert!(matches!(grid(0.5, &ch, 1.0, 1, Slice::Qq), Err(Failure::Invalid(_))));
    }
}
