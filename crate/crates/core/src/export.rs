//! CSV and JSON emission shared by the engines and the CLI.
//!
//! Every CSV starts with the comment line `# schema=1`; Monte-Carlo outputs
//! also carry their seed so any file can be regenerated.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::classical3d::SphereHistogram;
use crate::pulse_opt::ComparisonRow;
use crate::squeeze::SqueezeTrace;

pub const SCHEMA_VERSION: u32 = 1;

fn open(path: &Path) -> io::Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn preamble(w: &mut impl Write, seed: Option<u64>) -> io::Result<()> {
    writeln!(w, "# schema={SCHEMA_VERSION}")?;
    if let Some(s) = seed {
        writeln!(w, "# seed={s}")?;
    }
    Ok(())
}

/// `(theta, density[, caustic_flag])` columns.
pub fn write_density_csv(
    path: &Path,
    thetas: &[f64],
    density: &[f64],
    flags: Option<&[bool]>,
    seed: Option<u64>,
) -> io::Result<()> {
    let mut w = open(path)?;
    preamble(&mut w, seed)?;
    match flags {
        Some(f) => {
            writeln!(w, "theta,density,caustic_flag")?;
            for i in 0..thetas.len() {
                writeln!(w, "{},{},{}", thetas[i], density[i], u8::from(f[i]))?;
            }
        }
        None => {
            writeln!(w, "theta,density")?;
            for i in 0..thetas.len() {
                writeln!(w, "{},{}", thetas[i], density[i])?;
            }
        }
    }
    w.flush()
}

/// `(kick_index, tau, delta_tau, O)` rows of an accumulative run.
pub fn write_trace_csv(path: &Path, trace: &SqueezeTrace, seed: Option<u64>) -> io::Result<()> {
    let mut w = open(path)?;
    preamble(&mut w, seed)?;
    writeln!(w, "kick_index,tau,delta_tau,O")?;
    for s in &trace.steps {
        writeln!(w, "{},{},{},{}", s.index, s.tau, s.delta_tau, s.factor)?;
    }
    w.flush()
}

/// `(cos_theta_bin_center, density_per_solid_angle)` rows.
pub fn write_sphere_csv(path: &Path, hist: &SphereHistogram, seed: Option<u64>) -> io::Result<()> {
    let mut w = open(path)?;
    preamble(&mut w, seed)?;
    writeln!(w, "cos_theta,density_per_solid_angle")?;
    for (c, d) in hist.cos_theta_centers.iter().zip(&hist.density) {
        writeln!(w, "{c},{d}")?;
    }
    w.flush()
}

/// Contour matrix: one row per `tau` sample (first column `tau`), one
/// column per `theta` grid point. The grids themselves go to a JSON sidecar
/// next to the matrix.
pub fn write_contour_csv(
    path: &Path,
    taus: &[f64],
    thetas: &[f64],
    values: &[Vec<f64>],
) -> io::Result<()> {
    assert_eq!(taus.len(), values.len());
    let mut w = open(path)?;
    preamble(&mut w, None)?;
    for (t, row) in taus.iter().zip(values) {
        write!(w, "{t}")?;
        for v in row {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;

    let sidecar = path.with_extension("grids.json");
    let mut s = open(&sidecar)?;
    write!(s, "{{\"tau_grid\":[")?;
    write_float_list(&mut s, taus)?;
    write!(s, "],\"theta_grid\":[")?;
    write_float_list(&mut s, thetas)?;
    writeln!(s, "]}}")?;
    s.flush()
}

fn write_float_list(w: &mut impl Write, xs: &[f64]) -> io::Result<()> {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(w, ",")?;
        }
        write!(w, "{x}")?;
    }
    Ok(())
}

/// `(tau, theta, dtheta)` rows of a linearized focusing trajectory.
pub fn write_focus_csv(path: &Path, samples: &[(f64, f64, f64)]) -> io::Result<()> {
    let mut w = open(path)?;
    preamble(&mut w, None)?;
    writeln!(w, "tau,theta,dtheta")?;
    for (t, th, dth) in samples {
        writeln!(w, "{t},{th},{dth}")?;
    }
    w.flush()
}

/// `(kicks, O_acc, O_opt)` comparison rows.
pub fn write_table_csv(path: &Path, rows: &[ComparisonRow], seed: Option<u64>) -> io::Result<()> {
    let mut w = open(path)?;
    preamble(&mut w, seed)?;
    writeln!(w, "kicks,O_acc,O_opt")?;
    for r in rows {
        writeln!(w, "{},{},{}", r.kicks, r.o_accumulative, r.o_optimized)?;
    }
    w.flush()
}

/// `(theta0, theta)` rows of the single-kick classical map.
pub fn write_map_csv(path: &Path, theta0: &[f64], theta: &[f64]) -> io::Result<()> {
    let mut w = open(path)?;
    preamble(&mut w, None)?;
    writeln!(w, "theta0,theta")?;
    for (a, b) in theta0.iter().zip(theta) {
        writeln!(w, "{a},{b}")?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_csv_has_schema_line_and_flags() {
        let dir = std::env::temp_dir().join("rotor_core_export_test");
        let path = dir.join("d.csv");
        write_density_csv(&path, &[0.0, 0.5], &[1.0, 2.0], Some(&[false, true]), Some(7)).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# schema=1");
        assert_eq!(lines[1], "# seed=7");
        assert_eq!(lines[2], "theta,density,caustic_flag");
        assert_eq!(lines[3], "0,1,0");
        assert_eq!(lines[4], "0.5,2,1");
        std::fs::remove_dir_all(&dir).ok();
    }
}
