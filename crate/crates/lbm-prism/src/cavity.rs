//! Lid-driven cavity construction, throughput metric, and field
//! serialization.
//!
//! The cavity starts cold: every cell at rest equilibrium with unit density.
//! Walls are implicit — skipped swap links bounce populations back — and the
//! lid is realized entirely inside the kernels, so building the problem is
//! just allocating the equilibrium field.

use crate::error::{Error, Result};
use crate::kernels::KernelParams;
use crate::lattice::{DistributionField, DomainSpec, Q};
use crate::solvers::SolverKind;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufReader, BufWriter, Read, Seek, Write};
use std::path::Path;

/// Full description of one cavity run.
#[derive(Clone, Debug)]
pub struct CavityConfig {
    pub spec: DomainSpec,
    pub omega: f64,
    /// Lid speed along +Z.
    pub lid_speed: f64,
    pub steps: usize,
    pub tile: usize,
    pub workers: usize,
    pub solver: SolverKind,
}

impl CavityConfig {
    pub fn new(spec: DomainSpec, solver: SolverKind) -> Self {
        Self {
            spec,
            omega: 1.0,
            lid_speed: 0.05,
            steps: 0,
            tile: 16,
            workers: 1,
            solver,
        }
    }

    pub fn kernel_params(&self) -> Result<KernelParams> {
        KernelParams::new(self.omega, [0.0, 0.0, self.lid_speed])
    }

    pub fn run_params(&self) -> Result<crate::solvers::RunParams> {
        Ok(crate::solvers::RunParams {
            steps: self.steps,
            tile: self.tile,
            workers: self.workers,
            kernel: self.kernel_params()?,
        })
    }
}

/// Allocates the cavity field: every cell at equilibrium with `rho = 1`,
/// `u = 0`.
pub fn build_cavity(config: &CavityConfig) -> Result<DistributionField> {
    DistributionField::at_equilibrium(config.spec, 1.0, [0.0, 0.0, 0.0])
}

/// Million fluid lattice node updates per second:
/// `cells × steps / (seconds × 10^6)`.
pub fn mflups(cells: usize, steps: usize, seconds: f64) -> Result<f64> {
    if !(seconds > 0.0) {
        return Err(Error::NonPositiveDuration { seconds });
    }
    Ok(cells as f64 * steps as f64 / (seconds * 1e6))
}

/// One benchmark measurement (or the mean of a configuration's repeats).
#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub solver: SolverKind,
    pub spec: DomainSpec,
    pub tile: usize,
    pub workers: usize,
    pub steps: usize,
    pub seconds: f64,
    pub mflups: f64,
    pub rep: Rep,
}

/// Repeat index of a benchmark row; configuration means are labeled rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rep {
    Index(usize),
    Mean,
}

impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rep::Index(i) => write!(f, "{i}"),
            Rep::Mean => f.write_str("mean"),
        }
    }
}

/// Header row of the benchmark CSV.
pub const CSV_HEADER: &str = "solver,lx,ly,lz,tile,workers,steps,seconds,mflups,rep";

impl BenchRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.solver,
            self.spec.lx,
            self.spec.ly,
            self.spec.lz,
            self.tile,
            self.workers,
            self.steps,
            self.seconds,
            self.mflups,
            self.rep
        )
    }
}

/// Appends records to a CSV file, writing the header only when the file is
/// new or empty. Re-running never corrupts an existing header.
pub fn append_bench_records(path: &Path, records: &[BenchRecord]) -> Result<()> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    let is_empty = file.seek(std::io::SeekFrom::End(0))? == 0;
    let mut out = BufWriter::new(&mut file);
    if is_empty {
        writeln!(out, "{CSV_HEADER}")?;
    }
    for record in records {
        writeln!(out, "{}", record.csv_line())?;
    }
    out.flush()?;
    Ok(())
}

/// Writes the per-cell velocity norms as text lines `iX iY iZ norm` with 15
/// significant digits, in memory order.
pub fn write_norm_log(field: &DistributionField, path: &Path) -> Result<()> {
    let norms = crate::lattice::velocity_norm_field(field)?;
    let spec = field.spec();
    let mut out = BufWriter::new(File::create(path)?);
    for (cell, norm) in norms.iter().enumerate() {
        let (ix, iy, iz) = spec.coords_of(cell);
        writeln!(out, "{ix} {iy} {iz} {norm:.14e}")?;
    }
    out.flush()?;
    Ok(())
}

/// Binary dump layout: three little-endian u64 dimensions (lx, ly, lz)
/// followed by `lx·ly·lz·19` little-endian f64 slots in memory order.
pub fn write_field_dump(field: &DistributionField, path: &Path) -> Result<()> {
    let spec = field.spec();
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(&(spec.lx as u64).to_le_bytes())?;
    out.write_all(&(spec.ly as u64).to_le_bytes())?;
    out.write_all(&(spec.lz as u64).to_le_bytes())?;
    for value in field.data() {
        out.write_all(&value.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a binary dump back into a field. Malformed files are reported with
/// the byte offset at which the problem was found.
pub fn read_field_dump(path: &Path) -> Result<DistributionField> {
    let file = File::open(path)?;
    let mut reader = BufReader::new(file);

    let mut header = [0u8; 24];
    let got = read_up_to(&mut reader, &mut header)?;
    if got < 24 {
        return Err(Error::Format {
            offset: got as u64,
            message: format!("truncated header: expected 24 bytes, found {got}"),
        });
    }
    let lx = u64::from_le_bytes(header[0..8].try_into().unwrap());
    let ly = u64::from_le_bytes(header[8..16].try_into().unwrap());
    let lz = u64::from_le_bytes(header[16..24].try_into().unwrap());
    for (i, dim) in [lx, ly, lz].into_iter().enumerate() {
        if dim == 0 {
            return Err(Error::Format {
                offset: (i * 8) as u64,
                message: "zero dimension in header".into(),
            });
        }
    }
    let cells = lx
        .checked_mul(ly)
        .and_then(|v| v.checked_mul(lz))
        .filter(|&v| v <= (usize::MAX / (Q * 8)) as u64)
        .ok_or_else(|| Error::Format {
            offset: 0,
            message: format!("dimensions {lx}x{ly}x{lz} overflow the addressable size"),
        })? as usize;

    let slots = cells * Q;
    let mut data = Vec::new();
    data.try_reserve_exact(slots)
        .map_err(|_| Error::Allocation { bytes: slots * 8 })?;

    let mut buf = [0u8; 8];
    for i in 0..slots {
        let got = read_up_to(&mut reader, &mut buf)?;
        if got < 8 {
            return Err(Error::Format {
                offset: 24 + (i * 8 + got) as u64,
                message: format!(
                    "truncated data: expected {} slot bytes, file ends inside slot {i}",
                    slots * 8
                ),
            });
        }
        data.push(f64::from_le_bytes(buf));
    }
    let trailing = read_up_to(&mut reader, &mut buf)?;
    if trailing != 0 {
        return Err(Error::Format {
            offset: 24 + (slots * 8) as u64,
            message: "trailing bytes after the last slot".into(),
        });
    }

    let spec = DomainSpec::new(lx as usize, ly as usize, lz as usize)?;
    DistributionField::from_raw(spec, data)
}

/// Reads as many bytes as available, up to `buf.len()`; returns the count.
fn read_up_to(reader: &mut impl Read, buf: &mut [u8]) -> std::io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        let n = reader.read(&mut buf[filled..])?;
        if n == 0 {
            break;
        }
        filled += n;
    }
    Ok(filled)
}
