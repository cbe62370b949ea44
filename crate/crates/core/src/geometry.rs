//! Exact combinatorial geometry on point sets: hyperplanes through d-subsets,
//! side counts, k-facet profiles, facets and estranged facet pairs.
//!
//! Everything is brute force over all C(n, d) subsets. Points that land
//! within the on-band of a hyperplane are reported as degeneracies rather
//! than tie-broken.

use std::collections::HashSet;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mathcore::linalg::{dot, norm, simplex_volume, PIVOT_TOLERANCE};
use crate::mathcore::special::binomial;
use crate::sampling::{stream, PointSet};

/// Relative half-width of the band in which a point counts as lying on a
/// hyperplane.
pub const ON_BAND_TOLERANCE: f64 = 1e-9;
/// Normalised simplex content below which a subset is affinely dependent.
pub const GENERAL_POSITION_TOLERANCE: f64 = 1e-9;
const ZERO_OFFSET_TOLERANCE: f64 = 1e-13;

/// Strictly increasing list of point indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IndexSubset(Vec<usize>);

impl IndexSubset {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!("subset indices must be strictly increasing: {indices:?}")));
        }
        Ok(IndexSubset(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn is_disjoint(&self, other: &IndexSubset) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

/// `{x : normal · x = offset}` with a unit normal and `offset >= 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Hyperplane {
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SideCount {
    pub below: usize,
    pub above: usize,
    pub on: usize,
}

/// k-facet counts `e[k]` for k = 0..=n-d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KFacetProfile {
    pub n: usize,
    pub d: usize,
    pub e: Vec<u64>,
    /// Subsets with exactly (n-d)/2 points on each side; counted once in `e`.
    pub balanced: u64,
}

impl KFacetProfile {
    pub fn total(&self) -> u64 {
        self.e.iter().sum()
    }

    /// `k,e_k` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,e_k")?;
        for (k, e) in self.e.iter().enumerate() {
            writeln!(out, "{k},{e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetSet {
    pub n: usize,
    pub d: usize,
    pub facets: Vec<IndexSubset>,
}

impl FacetSet {
    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// One facet per row, as its sorted vertex indices under a `v1..vd` header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let header: Vec<String> = (1..=self.d).map(|j| format!("v{j}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for f in &self.facets {
            let row: Vec<String> = f.indices().iter().map(|i| i.to_string()).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// In-place lexicographic k-combinations of 0..n.
pub(crate) struct Combinations {
    current: Vec<usize>,
    n: usize,
    started: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations { current: (0..k).collect(), n, started: false }
    }

    pub(crate) fn advance(&mut self) -> Option<&[usize]> {
        let k = self.current.len();
        if !self.started {
            self.started = true;
            return (k <= self.n).then_some(&self.current[..]);
        }
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.current[i] < self.n - k + i {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                return Some(&self.current[..]);
            }
        }
        None
    }
}

fn check_subset(ps: &PointSet, indices: &[usize]) -> Result<()> {
    if indices.len() != ps.d() {
        return Err(Error::DimensionMismatch(format!("subset has {} points, need d = {}", indices.len(), ps.d())));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= ps.n()) {
        return Err(Error::InvalidParameter(format!("index {bad} out of range for n = {}", ps.n())));
    }
    Ok(())
}

/// Hyperplane through the d points of `s`.
pub fn hyperplane_through(ps: &PointSet, s: &IndexSubset) -> Result<Hyperplane> {
    check_subset(ps, s.indices())?;
    hyperplane_for(ps, s.indices(), ps.scale())
}

/// Solves the homogeneous system `[x_i, -1] · (θ, ρ) = 0` for the d defining
/// points by elimination with complete pivoting; the one free column gives
/// the null vector.
fn hyperplane_for(ps: &PointSet, indices: &[usize], scale: f64) -> Result<Hyperplane> {
    let d = ps.d();
    let w = d + 1;
    let mut m = Vec::with_capacity(d * w);
    for &i in indices {
        m.extend_from_slice(ps.point(i));
        m.push(-1.0);
    }
    let row_scale = (0..d).map(|r| norm(&m[r * w..(r + 1) * w])).fold(0.0, f64::max);
    let tol = PIVOT_TOLERANCE * row_scale;
    let mut cols: Vec<usize> = (0..w).collect();

    for k in 0..d {
        let (mut pr, mut pc, mut best) = (k, k, -1.0);
        for r in k..d {
            for c in k..w {
                let v = m[r * w + c].abs();
                if v > best {
                    (pr, pc, best) = (r, c, v);
                }
            }
        }
        if !(best > tol) {
            return Err(Error::Degenerate {
                subset: indices.to_vec(),
                reason: format!("points are affinely dependent (pivot {best:.3e})"),
            });
        }
        if pr != k {
            for c in 0..w {
                m.swap(pr * w + c, k * w + c);
            }
        }
        if pc != k {
            for r in 0..d {
                m.swap(r * w + pc, r * w + k);
            }
            cols.swap(pc, k);
        }
        let pivot = m[k * w + k];
        for r in k + 1..d {
            let f = m[r * w + k] / pivot;
            if f != 0.0 {
                for c in k..w {
                    m[r * w + c] -= f * m[k * w + c];
                }
            }
        }
    }

    // free variable sits in permuted column d
    let mut y = vec![0.0; w];
    y[d] = 1.0;
    for k in (0..d).rev() {
        let mut acc = m[k * w + d];
        for c in k + 1..d {
            acc += m[k * w + c] * y[c];
        }
        y[k] = -acc / m[k * w + k];
    }
    let mut v = vec![0.0; w];
    for (pos, &col) in cols.iter().enumerate() {
        v[col] = y[pos];
    }

    let theta_norm = norm(&v[..d]);
    if !(theta_norm > 0.0) || !theta_norm.is_finite() {
        return Err(Error::Degenerate { subset: indices.to_vec(), reason: "no finite normal".into() });
    }
    let mut normal: Vec<f64> = v[..d].iter().map(|x| x / theta_norm).collect();
    let mut offset = indices.iter().map(|&i| dot(&normal, ps.point(i))).sum::<f64>() / d as f64;

    if offset.abs() <= ZERO_OFFSET_TOLERANCE * scale {
        offset = 0.0;
        let lead = normal.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        if lead < 0.0 {
            normal.iter_mut().for_each(|x| *x = -*x);
        }
    } else if offset < 0.0 {
        normal.iter_mut().for_each(|x| *x = -*x);
        offset = -offset;
    }
    Ok(Hyperplane { normal, offset })
}

fn classify(ps: &PointSet, indices: &[usize], h: &Hyperplane, band: f64) -> SideCount {
    let mut side = SideCount::default();
    let mut next = 0;
    for i in 0..ps.n() {
        if next < indices.len() && indices[next] == i {
            next += 1;
            continue;
        }
        let v = h.signed_distance(ps.point(i));
        if v.abs() <= band {
            side.on += 1;
        } else if v < 0.0 {
            side.below += 1;
        } else {
            side.above += 1;
        }
    }
    side
}

fn strict_side_counts(ps: &PointSet, indices: &[usize], h: &Hyperplane, scale: f64) -> Result<SideCount> {
    let side = classify(ps, indices, h, ON_BAND_TOLERANCE * scale);
    if side.on > 0 {
        return Err(Error::Degenerate {
            subset: indices.to_vec(),
            reason: format!("{} other point(s) lie on its hyperplane", side.on),
        });
    }
    Ok(side)
}

/// Counts the points outside `s` strictly below and above `h`.
pub fn side_counts(ps: &PointSet, s: &IndexSubset, h: &Hyperplane) -> Result<SideCount> {
    check_subset(ps, s.indices())?;
    strict_side_counts(ps, s.indices(), h, ps.scale())
}

/// Side counts for the first d points, as used by fixed-subset experiments.
pub fn leading_subset_side_counts(ps: &PointSet) -> Result<SideCount> {
    let indices: Vec<usize> = (0..ps.d()).collect();
    check_subset(ps, &indices)?;
    let scale = ps.scale();
    let h = hyperplane_for(ps, &indices, scale)?;
    strict_side_counts(ps, &indices, &h, scale)
}

/// Whether the `d` points at `indices` form a facet of the hull of `ps`.
pub fn is_facet(ps: &PointSet, indices: &[usize]) -> Result<bool> {
    check_subset(ps, indices)?;
    let scale = ps.scale();
    let h = hyperplane_for(ps, indices, scale)?;
    let side = strict_side_counts(ps, indices, &h, scale)?;
    Ok(side.below == 0 || side.above == 0)
}

fn for_each_subset<F: FnMut(&[usize], SideCount)>(ps: &PointSet, mut visit: F) -> Result<()> {
    let (n, d) = (ps.n(), ps.d());
    if n < d {
        return Err(Error::InvalidParameter(format!("need n >= d, got n = {n}, d = {d}")));
    }
    let scale = ps.scale();
    let mut combos = Combinations::new(n, d);
    while let Some(idx) = combos.advance() {
        let h = hyperplane_for(ps, idx, scale)?;
        let side = strict_side_counts(ps, idx, &h, scale)?;
        visit(idx, side);
    }
    Ok(())
}

/// Exhaustive k-facet profile over all C(n, d) subsets.
pub fn kfacet_profile(ps: &PointSet) -> Result<KFacetProfile> {
    let m = ps.n().saturating_sub(ps.d());
    let mut e = vec![0u64; m + 1];
    let mut balanced = 0;
    for_each_subset(ps, |_, side| {
        let a = side.above;
        let b = m - a;
        e[a] += 1;
        if a == b {
            balanced += 1;
        } else {
            e[b] += 1;
        }
    })?;
    Ok(KFacetProfile { n: ps.n(), d: ps.d(), e, balanced })
}

/// All d-subsets with no points strictly on one side.
pub fn facet_set(ps: &PointSet) -> Result<FacetSet> {
    let mut facets = Vec::new();
    for_each_subset(ps, |idx, side| {
        if side.below == 0 || side.above == 0 {
            facets.push(IndexSubset(idx.to_vec()));
        }
    })?;
    Ok(FacetSet { n: ps.n(), d: ps.d(), facets })
}

fn mask(s: &IndexSubset) -> u128 {
    s.indices().iter().fold(0u128, |m, &i| m | (1u128 << i))
}

/// Number of unordered facet pairs that share no vertex.
pub fn estranged_pair_count(fs: &FacetSet) -> u64 {
    if fs.n <= 128 {
        if fs.n == 2 * fs.d {
            let full = if fs.n == 128 { u128::MAX } else { (1u128 << fs.n) - 1 };
            let set: HashSet<u128> = fs.facets.iter().map(mask).collect();
            let hits = set.iter().filter(|&&m| set.contains(&(full & !m))).count() as u64;
            return hits / 2;
        }
        let masks: Vec<u128> = fs.facets.iter().map(mask).collect();
        let mut count = 0;
        for (i, a) in masks.iter().enumerate() {
            count += masks[i + 1..].iter().filter(|&&b| a & b == 0).count() as u64;
        }
        return count;
    }
    let mut count = 0;
    for (i, a) in fs.facets.iter().enumerate() {
        count += fs.facets[i + 1..].iter().filter(|b| a.is_disjoint(b)).count() as u64;
    }
    count
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneralPositionReport {
    pub passed: bool,
    pub exhaustive: bool,
    pub subsets_checked: u64,
    /// First affinely dependent subset found, if any.
    pub violation: Option<Vec<usize>>,
    pub min_normalized_content: f64,
}

pub const EXHAUSTIVE_GENERAL_POSITION_MAX_N: usize = 16;
pub const SAMPLED_GENERAL_POSITION_SUBSETS: usize = 10_000;

/// Simplex content scaled by the product of edge lengths from the first
/// vertex: 1 for orthogonal edges, 0 for dependent points.
fn normalized_content(ps: &PointSet, idx: &[usize]) -> f64 {
    let points: Vec<&[f64]> = idx.iter().map(|&i| ps.point(i)).collect();
    let k = points.len() - 1;
    let mut denom = 1.0;
    for p in &points[1..] {
        denom *= norm(&p.iter().zip(points[0]).map(|(a, b)| a - b).collect::<Vec<_>>());
    }
    if denom == 0.0 {
        return 0.0;
    }
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    simplex_volume(&points).map_or(0.0, |v| v * fact / denom)
}

/// Checks that every subset of at most d+1 points is affinely independent.
///
/// Exhaustive for n <= 16; otherwise 10^4 random (d+1)-subsets drawn from a
/// fixed stream, so the report is reproducible.
pub fn general_position_check(ps: &PointSet) -> GeneralPositionReport {
    let k = (ps.d() + 1).min(ps.n());
    let mut report = GeneralPositionReport {
        passed: true,
        exhaustive: ps.n() <= EXHAUSTIVE_GENERAL_POSITION_MAX_N,
        subsets_checked: 0,
        violation: None,
        min_normalized_content: f64::INFINITY,
    };
    let check = |idx: &[usize], report: &mut GeneralPositionReport| -> bool {
        let c = normalized_content(ps, idx);
        report.subsets_checked += 1;
        report.min_normalized_content = report.min_normalized_content.min(c);
        if c <= GENERAL_POSITION_TOLERANCE {
            report.passed = false;
            report.violation = Some(idx.to_vec());
            return false;
        }
        true
    };
    if report.exhaustive {
        let mut combos = Combinations::new(ps.n(), k);
        while let Some(idx) = combos.advance() {
            let idx = idx.to_vec();
            if !check(&idx, &mut report) {
                break;
            }
        }
    } else {
        let mut rng = stream(0x6765_6e70_6f73, 0);
        for _ in 0..SAMPLED_GENERAL_POSITION_SUBSETS {
            let mut idx: Vec<usize> = Vec::with_capacity(k);
            while idx.len() < k {
                let i = (rng.next_u64() % ps.n() as u64) as usize;
                if !idx.contains(&i) {
                    idx.push(i);
                }
            }
            idx.sort_unstable();
            if !check(&idx, &mut report) {
                break;
            }
        }
    }
    report
}

/// C(n, d) as a u64, or a resource-cap error when it exceeds `cap`.
pub fn subset_count_within(n: usize, d: usize, cap: u64) -> Result<u64> {
    match binomial(n as u64, d as u64) {
        Some(c) if c <= cap => Ok(c),
        _ => Err(Error::ResourceCap(format!("C({n}, {d}) exceeds the subset cap {cap}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::gaussian_point_set;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn subset(v: &[usize]) -> IndexSubset {
        IndexSubset::new(v.to_vec()).unwrap()
    }

    #[test]
    fn index_subset_must_increase() {
        assert!(IndexSubset::new(vec![0, 2, 5]).is_ok());
        assert!(IndexSubset::new(vec![0, 0]).is_err());
        assert!(IndexSubset::new(vec![3, 1]).is_err());
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut c = Combinations::new(5, 2);
        let mut seen = Vec::new();
        while let Some(x) = c.advance() {
            seen.push(x.to_vec());
        }
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[9], vec![3, 4]);
        let mut c = Combinations::new(2, 3);
        assert!(c.advance().is_none());
    }

    #[test]
    fn hyperplane_examples() {
        let ps = PointSet::from_points(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let h = hyperplane_through(&ps, &subset(&[0, 1])).unwrap();
        assert!((h.normal[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((h.normal[1] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((h.offset - FRAC_1_SQRT_2).abs() < 1e-15);

        let ps = PointSet::from_points(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        let h = hyperplane_through(&ps, &subset(&[0, 1])).unwrap();
        assert_eq!(h.offset, 0.0);
        assert!((h.normal[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((h.normal[1] + FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn hyperplane_in_one_dimension() {
        let ps = PointSet::from_points(&[[-2.5], [3.0]]).unwrap();
        let h = hyperplane_through(&ps, &subset(&[0])).unwrap();
        assert_eq!(h.normal, vec![-1.0]);
        assert!((h.offset - 2.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_subset_is_rejected() {
        let ps = PointSet::from_points(&[[1.0, 1.0, 0.0], [2.0, 2.0, 0.0], [3.0, 3.0, 0.0]]).unwrap();
        assert!(matches!(hyperplane_through(&ps, &subset(&[0, 1, 2])), Err(Error::Degenerate { .. })));
        assert!(hyperplane_through(&ps, &subset(&[0, 1])).is_err());
    }

    #[test]
    fn defining_points_lie_on_plane() {
        let mut s = stream(11, 0);
        for d in 1..=8 {
            let ps = gaussian_point_set(&mut s, d + 3, d).unwrap();
            let idx: Vec<usize> = (1..=d).collect();
            let h = hyperplane_through(&ps, &subset(&idx)).unwrap();
            assert!((norm(&h.normal) - 1.0).abs() < 1e-12);
            assert!(h.offset >= 0.0);
            for &i in &idx {
                assert!(h.signed_distance(ps.point(i)).abs() < 1e-9 * ps.scale());
            }
        }
    }

    #[test]
    fn side_count_examples() {
        let ps = PointSet::from_points(&[[0.0], [1.0], [2.0]]).unwrap();
        let s = subset(&[1]);
        let h = hyperplane_through(&ps, &s).unwrap();
        let c = side_counts(&ps, &s, &h).unwrap();
        assert_eq!((c.below, c.above, c.on), (1, 1, 0));

        // (0.2, 0.2) sits inside the triangle of the other three
        let ps = PointSet::from_points(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.2, 0.2]]).unwrap();
        let s = subset(&[0, 1]);
        let h = hyperplane_through(&ps, &s).unwrap();
        let c = side_counts(&ps, &s, &h).unwrap();
        assert_eq!(c.below.min(c.above), 0);
        assert_eq!(c.below.max(c.above), 2);
    }

    #[test]
    fn on_band_is_an_error() {
        let ps = PointSet::from_points(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 1.0]]).unwrap();
        let s = subset(&[0, 1]);
        let h = hyperplane_through(&ps, &s).unwrap();
        assert!(matches!(side_counts(&ps, &s, &h), Err(Error::Degenerate { .. })));
        assert!(kfacet_profile(&ps).is_err());
    }

    #[test]
    fn counts_are_conserved() {
        let ps = gaussian_point_set(&mut stream(12, 0), 8, 3).unwrap();
        let mut c = Combinations::new(8, 3);
        while let Some(idx) = c.advance() {
            let s = subset(idx);
            let h = hyperplane_through(&ps, &s).unwrap();
            let side = side_counts(&ps, &s, &h).unwrap();
            assert_eq!(side.below + side.above, 5);
        }
    }

    #[test]
    fn profile_examples() {
        let ps = PointSet::from_points(&[[0.3], [-1.0], [2.0]]).unwrap();
        let p = kfacet_profile(&ps).unwrap();
        assert_eq!(p.e, vec![2, 1, 2]);
        assert_eq!(p.balanced, 1);

        for d in 1..=6 {
            let ps = gaussian_point_set(&mut stream(13, d as u64), d + 1, d).unwrap();
            let p = kfacet_profile(&ps).unwrap();
            assert_eq!(p.e, vec![d as u64 + 1, d as u64 + 1]);
        }

        let ps = gaussian_point_set(&mut stream(14, 0), 5, 2).unwrap();
        let p = kfacet_profile(&ps).unwrap();
        assert_eq!(p.total(), 20);
        assert_eq!(p.balanced, 0);
    }

    #[test]
    fn facet_examples() {
        let ps = gaussian_point_set(&mut stream(15, 0), 5, 4).unwrap();
        assert_eq!(facet_set(&ps).unwrap().len(), 5);

        let square = PointSet::from_points(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]).unwrap();
        let fs = facet_set(&square).unwrap();
        assert_eq!(fs.len(), 4);
        assert_eq!(estranged_pair_count(&fs), 2);
    }

    #[test]
    fn estranged_examples() {
        let simplex = gaussian_point_set(&mut stream(16, 0), 4, 3).unwrap();
        assert_eq!(estranged_pair_count(&facet_set(&simplex).unwrap()), 0);

        // jittered so the coordinate planes through four vertices break up
        let mut jitter = stream(16, 1);
        let mut pts = Vec::new();
        for i in 0..3 {
            for s in [1.0, -1.0] {
                let mut p: Vec<f64> = (0..3).map(|_| 1e-3 * jitter.standard_normal()).collect();
                p[i] += s;
                pts.push(p);
            }
        }
        let octahedron = PointSet::from_points(&pts).unwrap();
        let fs = facet_set(&octahedron).unwrap();
        assert_eq!(fs.len(), 8);
        assert_eq!(estranged_pair_count(&fs), 4);
    }

    #[test]
    fn estranged_general_path_matches_brute_force() {
        let ps = gaussian_point_set(&mut stream(17, 0), 9, 2).unwrap();
        let fs = facet_set(&ps).unwrap();
        let mut brute = 0;
        for i in 0..fs.len() {
            for j in i + 1..fs.len() {
                if fs.facets[i].is_disjoint(&fs.facets[j]) {
                    brute += 1;
                }
            }
        }
        assert_eq!(estranged_pair_count(&fs), brute);
    }

    #[test]
    fn general_position_examples() {
        let ps = gaussian_point_set(&mut stream(18, 0), 10, 3).unwrap();
        let r = general_position_check(&ps);
        assert!(r.passed && r.exhaustive);
        assert_eq!(r.subsets_checked, 210);

        let ps = PointSet::from_points(&[[0.0, 0.0], [1.0, 1.0], [3.0, 0.5], [2.0, 2.0]]).unwrap();
        let r = general_position_check(&ps);
        assert!(!r.passed);
        assert_eq!(r.violation, Some(vec![0, 1, 3]));

        let ps = PointSet::from_points(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [0.0, 0.0]]).unwrap();
        let r = general_position_check(&ps);
        assert!(!r.passed);
        let v = r.violation.unwrap();
        assert!(v == vec![0, 2, 4] || v == vec![1, 3, 4], "{v:?}");
    }

    #[test]
    fn general_position_sampled_for_large_n() {
        let ps = gaussian_point_set(&mut stream(19, 0), 40, 3).unwrap();
        let r = general_position_check(&ps);
        assert!(r.passed && !r.exhaustive);
        assert_eq!(r.subsets_checked, SAMPLED_GENERAL_POSITION_SUBSETS as u64);
    }

    #[test]
    fn csv_outputs() {
        let ps = PointSet::from_points(&[[0.3], [-1.0], [2.0]]).unwrap();
        let mut buf = Vec::new();
        kfacet_profile(&ps).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "k,e_k\n0,2\n1,1\n2,2\n");
        let mut buf = Vec::new();
        facet_set(&ps).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "v1\n1\n2\n");
    }
}
