use dunkl_core::dunkl_algebra::ScalarField;
use dunkl_core::oracles::reference_g;
use dunkl_core::rootsys::RootSystem;

use crate::config::BoundarySpec;
use crate::error::{CliError, CliResult};

fn index(i: usize, dim: usize) -> CliResult<usize> {
    if i == 0 || i > dim {
        return Err(CliError::Config(format!("coordinate index {i} is outside 1..={dim}")));
    }
    Ok(i - 1)
}

pub fn boundary_field(spec: &BoundarySpec, sys: &RootSystem) -> CliResult<ScalarField> {
    let dim = sys.dim();
    Ok(match spec {
        BoundarySpec::Const { value } => ScalarField::constant(*value),
        BoundarySpec::Coord { index: i } => {
            let i0 = index(*i, dim)?;
            ScalarField::new(format!("x{i}"), move |y: &[f64]| y[i0])
        }
        BoundarySpec::Product { i, j } => {
            let (a, b) = (index(*i, dim)?, index(*j, dim)?);
            ScalarField::new(format!("x{i}*x{j}"), move |y: &[f64]| y[a] * y[b])
        }
        BoundarySpec::GLambda => reference_g(sys)?.field,
        BoundarySpec::Table { path } => {
            let samples = read_table(path, dim)?;
            ScalarField::new(format!("table:{path}"), move |y: &[f64]| nearest(&samples, y))
        }
    })
}

/// Rows of `x1..xd,value` with a header line.
fn read_table(path: &str, dim: usize) -> CliResult<Vec<(Vec<f64>, f64)>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Config(format!("{path}: {e}")))?;
    let mut out = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Config(format!("{path}: {e}")))?;
        if rec.len() != dim + 1 {
            return Err(CliError::Config(format!(
                "{path}: row {} has {} fields, expected {}",
                line + 2,
                rec.len(),
                dim + 1
            )));
        }
        let vals = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| CliError::Config(format!("{path}: row {}: {e}", line + 2)))?;
        out.push((vals[..dim].to_vec(), vals[dim]));
    }
    if out.is_empty() {
        return Err(CliError::Config(format!("{path}: boundary table is empty")));
    }
    Ok(out)
}

fn nearest(samples: &[(Vec<f64>, f64)], y: &[f64]) -> f64 {
    let d2 = |p: &[f64]| p.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
    samples
        .iter()
        .min_by(|a, b| d2(&a.0).total_cmp(&d2(&b.0)))
        .map_or(f64::NAN, |s| s.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dunkl_core::rootsys::Family;
    use std::io::Write;

    #[test]
    fn selectors_evaluate() {
        let sys = RootSystem::new(Family::Z2Product, 2, &[0.5, 0.5]).unwrap();
        let x = [0.5, -2.0];
        assert_eq!(boundary_field(&BoundarySpec::Coord { index: 2 }, &sys).unwrap().eval(&x), -2.0);
        assert_eq!(boundary_field(&BoundarySpec::Product { i: 1, j: 2 }, &sys).unwrap().eval(&x), -1.0);
        assert_eq!(boundary_field(&BoundarySpec::Const { value: 4.0 }, &sys).unwrap().eval(&x), 4.0);
        // λ = 1 in the plane with γ = 1
        let g = boundary_field(&BoundarySpec::GLambda, &sys).unwrap().eval(&[2.0, 0.0]);
        assert!((g - 0.25).abs() < 1e-15);
        assert!(boundary_field(&BoundarySpec::Coord { index: 3 }, &sys).is_err());
    }

    #[test]
    fn table_uses_nearest_sample() {
        let sys = RootSystem::new(Family::Z2Product, 2, &[0.5, 0.5]).unwrap();
        let mut f = tempfile_path("table_uses_nearest_sample.csv");
        writeln!(f.1, "x1,x2,value\n1,0,10\n0,1,20\n-1,0,30").unwrap();
        let field = boundary_field(&BoundarySpec::Table { path: f.0.clone() }, &sys).unwrap();
        assert_eq!(field.eval(&[0.9, 0.2]), 10.0);
        assert_eq!(field.eval(&[-0.1, 1.1]), 20.0);
        std::fs::remove_file(&f.0).ok();
    }

    fn tempfile_path(name: &str) -> (String, std::fs::File) {
        let p = std::env::temp_dir().join(format!("dunkl-{}-{name}", std::process::id()));
        let file = std::fs::File::create(&p).unwrap();
        (p.display().to_string(), file)
    }
}
