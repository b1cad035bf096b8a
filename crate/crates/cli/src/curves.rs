use std::path::Path;

use es_riemann::dissipation::{scalar_dissipation_curve, DissipationKind, DissipationSpec};

use crate::config::check_omega;
use crate::error::CliError;
use crate::output::{csv_bytes, write_file};

pub const CURVE_COLUMNS: [&str; 6] = ["lambda", "d_LF", "d_HLL", "d_LW", "d_HLLomega", "d_HLLXomega"];

/// Rows `[λ, d_LF, d_HLL, d_LW, d_HLLω, d_HLLXω]` on `samples` points of
/// `[λ_L, λ_R]`, hybrids at `omega`.
pub fn dissipation_curves(
    lambda_l: f64,
    lambda_r: f64,
    omega: f64,
    dt_over_dx: f64,
    samples: usize,
) -> Result<Vec<[f64; 6]>, CliError> {
    let omega = check_omega(omega)?;
    if !(dt_over_dx > 0.0 && dt_over_dx.is_finite()) {
        return Err(CliError::Usage(format!("--dt-over-dx must be positive, got {dt_over_dx}")));
    }
    use DissipationKind::*;
    let specs = [
        DissipationSpec::plain(LaxFriedrichs),
        DissipationSpec::plain(Hll),
        DissipationSpec::plain(LaxWendroff),
        DissipationSpec::new(HllOmega, omega)?,
        DissipationSpec::new(HllxOmega, omega)?,
    ];
    let curves = specs
        .iter()
        .map(|s| scalar_dissipation_curve(s, lambda_l, lambda_r, dt_over_dx, samples))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((0..samples)
        .map(|i| {
            let mut row = [curves[0][i].0, 0.0, 0.0, 0.0, 0.0, 0.0];
            for (c, curve) in curves.iter().enumerate() {
                row[c + 1] = curve[i].1;
            }
            row
        })
        .collect())
}

pub fn emit_dissipation_curves(
    lambda_l: f64,
    lambda_r: f64,
    omega: f64,
    dt_over_dx: f64,
    samples: usize,
    path: &Path,
) -> Result<(), CliError> {
    let rows = dissipation_curves(lambda_l, lambda_r, omega, dt_over_dx, samples)?;
    write_file(path, &csv_bytes(&CURVE_COLUMNS, rows.into_iter().map(Vec::from), path)?)
}
