//! Reproducible random streams and Gaussian point sets.
//!
//! A stream is keyed by `(master_seed, stream_id)`. Experiments use the trial
//! index as the stream id, so trial `i` draws the same numbers whichever
//! thread runs it.

use std::io::{Read, Write};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Counter-based random stream (ChaCha8 keyed by the master seed, with the
/// stream id selecting the nonce).
#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
    spare_normal: Option<f64>,
}

pub fn stream(master_seed: u64, stream_id: u64) -> RngStream {
    RngStream::new(master_seed, stream_id)
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        RngStream { master_seed, stream_id, rng, spare_normal: None }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Standard normal deviate by Marsaglia's polar method. Deviates come in
    /// pairs; the second one is kept for the next call.
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * m);
                return u * m;
            }
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Seeded { master_seed: u64, stream_id: u64 },
    External,
}

/// n points in R^d, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    n: usize,
    d: usize,
    coords: Vec<f64>,
    provenance: Provenance,
}

impl PointSet {
    pub fn new(n: usize, d: usize, coords: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidParameter(format!("point set needs n, d >= 1 (n = {n}, d = {d})")));
        }
        if coords.len() != n * d {
            return Err(Error::DimensionMismatch(format!(
                "{n} points in R^{d} need {} coordinates, got {}",
                n * d,
                coords.len()
            )));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("coordinate {bad}")));
        }
        Ok(PointSet { n, d, coords, provenance })
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let d = points.first().map_or(0, |p| p.as_ref().len());
        let mut coords = Vec::with_capacity(points.len() * d);
        for p in points {
            let p = p.as_ref();
            if p.len() != d {
                return Err(Error::DimensionMismatch(format!("point of length {} in R^{d}", p.len())));
            }
            coords.extend_from_slice(p);
        }
        PointSet::new(points.len(), d, coords, Provenance::External)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.d)
    }

    /// Largest Euclidean norm among the points (at least 1), the length scale
    /// for geometric tolerances.
    pub fn scale(&self) -> f64 {
        self.points().map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(1.0, f64::max)
    }

    /// Applies `x -> rotation * x + shift` to every point.
    pub fn transformed(&self, rotation: &crate::mathcore::Matrix, shift: &[f64]) -> Result<Self> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for p in self.points() {
            let q = rotation.mul_vec(p)?;
            coords.extend(q.iter().zip(shift).map(|(a, b)| a + b));
        }
        PointSet::new(self.n, self.d, coords, Provenance::External)
    }

    /// CSV with header `x1,...,xd`, 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<String> = (1..=self.d).map(|j| format!("x{j}")).collect();
        w.write_record(&header).map_err(csv_err)?;
        for p in self.points() {
            w.write_record(p.iter().map(|x| format!("{x:.16e}"))).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let header = r.headers().map_err(csv_err)?.clone();
        let d = header.len();
        for (j, name) in header.iter().enumerate() {
            if name != format!("x{}", j + 1) {
                return Err(Error::Parse(format!("unexpected column '{name}' at position {}", j + 1)));
            }
        }
        let mut coords = Vec::new();
        let mut n = 0;
        for record in r.records() {
            let record = record.map_err(csv_err)?;
            for field in record.iter() {
                coords.push(field.parse::<f64>().map_err(|e| Error::Parse(format!("row {}: '{field}': {e}", n + 1)))?);
            }
            n += 1;
        }
        PointSet::new(n, d, coords, Provenance::External)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// n i.i.d. N(0, I_d) points.
pub fn gaussian_point_set(stream: &mut RngStream, n: usize, d: usize) -> Result<PointSet> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter(format!("n = {n}, d = {d}; both must be >= 1")));
    }
    let coords = (0..n * d).map(|_| stream.standard_normal()).collect();
    let provenance = Provenance::Seeded { master_seed: stream.master_seed, stream_id: stream.stream_id };
    PointSet::new(n, d, coords, provenance)
}

/// Uniform direction on the unit sphere S^{d-1}.
pub fn unit_direction(stream: &mut RngStream, d: usize) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("unit_direction needs d >= 2, got {d}")));
    }
    loop {
        let v: Vec<f64> = (0..d).map(|_| stream.standard_normal()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-150 {
            return Ok(v.into_iter().map(|x| x / norm).collect());
        }
    }
}

/// `count` standard Gaussian points in R^d conditioned on `x1 <= t`.
///
/// Only `t >= 0` is supported: the acceptance rate is then at least 1/2.
pub fn halfspace_truncated_gaussians(stream: &mut RngStream, d: usize, t: f64, count: usize) -> Result<PointSet> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("truncation level t = {t} must be >= 0")));
    }
    if d == 0 || count == 0 {
        return Err(Error::InvalidParameter(format!("d = {d}, count = {count}; both must be >= 1")));
    }
    let mut coords = Vec::with_capacity(count * d);
    for _ in 0..count {
        let x1 = loop {
            let z = stream.standard_normal();
            if z <= t {
                break z;
            }
        };
        coords.push(x1);
        coords.extend((1..d).map(|_| stream.standard_normal()));
    }
    let provenance = Provenance::Seeded { master_seed: stream.master_seed, stream_id: stream.stream_id };
    PointSet::new(count, d, coords, provenance)
}
