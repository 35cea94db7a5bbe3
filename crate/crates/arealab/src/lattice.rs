//! Cubic lattice geometry: site indexing, cubic regions, boundary arithmetic,
//! and the site permutations induced by lattice symmetries.
//!
//! Sites of [L]^D are indexed row-major with axis D slowest, so the k-th
//! hyperplane (all sites with last coordinate k−1) occupies the contiguous
//! index range [(k−1)·L^(D−1), k·L^(D−1)). The boundary size of a cubic
//! region with edge lengths l_1, …, l_D is the arithmetic expression
//! |∂A| = 2·Σ_j Π_{k≠j} l_k, which is the normative definition here — it is
//! not derived from bond counting.

use serde::Serialize;

use crate::error::{Error, Result};

/// Cubic lattice [L]^D with local dimension d at every site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Lattice {
    #[serde(rename = "D")]
    dim: usize,
    #[serde(rename = "L")]
    side: usize,
    #[serde(rename = "d")]
    local_dim: usize,
}

impl Lattice {
    pub fn new(dim: usize, side: usize, local_dim: usize) -> Result<Lattice> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if side == 0 {
            return Err(Error::ZeroSide);
        }
        if !(2..=4).contains(&local_dim) {
            return Err(Error::BadLocalDimension { d: local_dim });
        }
        let sites = (side as u128).checked_pow(dim as u32);
        match sites {
            // configurations pack 2 bits per site into one 128-bit word
            Some(s) if s <= crate::config::MAX_SITES as u128 => {
                Ok(Lattice { dim, side, local_dim })
            }
            _ => Err(Error::TooManySites {
                sites: sites.map_or(usize::MAX, |s| s.min(usize::MAX as u128) as usize),
                max: crate::config::MAX_SITES,
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    /// Total number of sites L^D.
    pub fn n_sites(&self) -> usize {
        self.side.pow(self.dim as u32)
    }

    /// Sites in one hyperplane, L^(D−1).
    pub fn hyperplane_size(&self) -> usize {
        self.n_sites() / self.side
    }

    /// Site index of a coordinate vector; axis 1 varies fastest.
    pub fn site_index(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.dim);
        let mut index = 0;
        for &c in coords.iter().rev() {
            debug_assert!(c < self.side);
            index = index * self.side + c;
        }
        index
    }

    /// Coordinates of a site index.
    pub fn site_coords(&self, mut index: usize) -> Vec<usize> {
        debug_assert!(index < self.n_sites());
        let mut coords = vec![0; self.dim];
        for c in coords.iter_mut() {
            *c = index % self.side;
            index /= self.side;
        }
        coords
    }

    /// Contiguous index range of the k-th hyperplane, k ∈ [1, L].
    pub fn hyperplane_sites(&self, k: usize) -> Result<std::ops::Range<usize>> {
        if k == 0 || k > self.side {
            return Err(Error::HyperplaneOutOfRange { k, side: self.side });
        }
        let plane = self.hyperplane_size();
        Ok((k - 1) * plane..k * plane)
    }

    /// The (D−1)-dimensional cross-section lattice of one hyperplane.
    ///
    /// For D = 1 the hyperplane is a single point, represented as a
    /// one-dimensional lattice of side 1.
    pub fn cross_section(&self) -> Result<Lattice> {
        if self.dim == 1 {
            Lattice::new(1, 1, self.local_dim)
        } else {
            Lattice::new(self.dim - 1, self.side, self.local_dim)
        }
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis == 0 || axis > self.dim {
            return Err(Error::AxisOutOfRange { axis, dim: self.dim });
        }
        Ok(())
    }

    fn permutation_from(&self, f: impl Fn(&mut [usize])) -> SitePermutation {
        let n = self.n_sites();
        let mut map = vec![0; n];
        let mut coords;
        for (site, image) in map.iter_mut().enumerate() {
            coords = self.site_coords(site);
            f(&mut coords);
            *image = self.site_index(&coords);
        }
        SitePermutation { map }
    }

    /// Cyclic shift by `shift` along a 1-based axis.
    pub fn translation(&self, axis: usize, shift: usize) -> Result<SitePermutation> {
        self.check_axis(axis)?;
        let side = self.side;
        Ok(self.permutation_from(|c| c[axis - 1] = (c[axis - 1] + shift) % side))
    }

    /// Quarter turn in the plane of two distinct 1-based axes:
    /// (c_a, c_b) ↦ (L−1−c_b, c_a).
    pub fn plane_rotation(&self, a: usize, b: usize) -> Result<SitePermutation> {
        self.check_axis(a)?;
        self.check_axis(b)?;
        if a == b {
            return Err(Error::CoincidentAxes);
        }
        let side = self.side;
        Ok(self.permutation_from(|c| {
            let (ca, cb) = (c[a - 1], c[b - 1]);
            c[a - 1] = side - 1 - cb;
            c[b - 1] = ca;
        }))
    }

    /// Rotation taking the stacking axis D onto axis j (identity for j = D).
    pub fn rotation_to_axis(&self, j: usize) -> Result<SitePermutation> {
        self.check_axis(j)?;
        if j == self.dim {
            Ok(SitePermutation::identity(self.n_sites()))
        } else {
            self.plane_rotation(j, self.dim)
        }
    }

    /// Coordinate reversal c ↦ L−1−c along a 1-based axis.
    pub fn reflection(&self, axis: usize) -> Result<SitePermutation> {
        self.check_axis(axis)?;
        let side = self.side;
        Ok(self.permutation_from(|c| c[axis - 1] = side - 1 - c[axis - 1]))
    }

    /// Exchange of two coordinate axes.
    pub fn axis_transposition(&self, a: usize, b: usize) -> Result<SitePermutation> {
        self.check_axis(a)?;
        self.check_axis(b)?;
        if a == b {
            return Err(Error::CoincidentAxes);
        }
        Ok(self.permutation_from(|c| c.swap(a - 1, b - 1)))
    }
}

/// Bijection on site indices, `map[i]` = image of site i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SitePermutation {
    map: Vec<usize>,
}

impl SitePermutation {
    pub fn new(map: Vec<usize>) -> Result<SitePermutation> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &image in &map {
            if image >= n || seen[image] {
                return Err(Error::NotAPermutation { sites: n });
            }
            seen[image] = true;
        }
        Ok(SitePermutation { map })
    }

    pub fn identity(n: usize) -> SitePermutation {
        SitePermutation { map: (0..n).collect() }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Composition: apply `self` first, then `other`.
    pub fn then(&self, other: &SitePermutation) -> Result<SitePermutation> {
        if self.len() != other.len() {
            return Err(Error::NotAPermutation { sites: other.len() });
        }
        Ok(SitePermutation {
            map: self.map.iter().map(|&i| other.map[i]).collect(),
        })
    }
}

/// Axis-aligned cubic region [offset, offset + lengths) of a lattice.
///
/// Regions never wrap around the periodic boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    offset: Vec<usize>,
    lengths: Vec<usize>,
}

impl Region {
    pub fn new(lattice: &Lattice, offset: Vec<usize>, lengths: Vec<usize>) -> Result<Region> {
        if offset.len() != lattice.dim() || lengths.len() != lattice.dim() {
            return Err(Error::RegionRankMismatch {
                expected: lattice.dim(),
                got: offset.len().max(lengths.len()),
            });
        }
        for (axis, (&o, &l)) in offset.iter().zip(&lengths).enumerate() {
            if l == 0 {
                return Err(Error::EmptyRegion);
            }
            if o + l > lattice.side() {
                return Err(Error::RegionOutOfBounds {
                    axis: axis + 1,
                    offset: o,
                    length: l,
                    side: lattice.side(),
                });
            }
        }
        Ok(Region { offset, lengths })
    }

    pub fn offset(&self) -> &[usize] {
        &self.offset
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn volume(&self) -> usize {
        self.lengths.iter().product()
    }

    /// |∂A| = 2·Σ_j Π_{k≠j} l_k.
    pub fn boundary(&self) -> u64 {
        let mut total: u128 = 0;
        for j in 0..self.lengths.len() {
            let mut prod: u128 = 1;
            for (k, &l) in self.lengths.iter().enumerate() {
                if k != j {
                    prod *= l as u128;
                }
            }
            total += prod;
        }
        (2 * total) as u64
    }

    /// Sorted site indices covered by the region.
    pub fn sites(&self, lattice: &Lattice) -> Result<Vec<usize>> {
        // re-validate so regions reconstructed from CLI input cannot escape bounds
        let checked = Region::new(lattice, self.offset.clone(), self.lengths.clone())?;
        let mut sites = Vec::with_capacity(checked.volume());
        let mut coords = checked.offset.clone();
        loop {
            sites.push(lattice.site_index(&coords));
            // odometer over the box, axis 1 fastest
            let mut axis = 0;
            loop {
                if axis == coords.len() {
                    sites.sort_unstable();
                    return Ok(sites);
                }
                coords[axis] += 1;
                if coords[axis] < checked.offset[axis] + checked.lengths[axis] {
                    break;
                }
                coords[axis] = checked.offset[axis];
                axis += 1;
            }
        }
    }

    /// Sorted site indices of the complement of the region.
    pub fn complement_sites(&self, lattice: &Lattice) -> Result<Vec<usize>> {
        let inside = self.sites(lattice)?;
        let mut mask = vec![false; lattice.n_sites()];
        for &s in &inside {
            mask[s] = true;
        }
        Ok((0..lattice.n_sites()).filter(|&s| !mask[s]).collect())
    }

    /// Compact display form `offset:lengths`, e.g. `0,0:2,3`.
    pub fn label(&self) -> String {
        let join = |v: &[usize]| {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        format!("{}:{}", join(&self.offset), join(&self.lengths))
    }
}

/// All cubic regions of volume ≤ `max_volume`, ordered lexicographically by
/// offset then lengths.
pub fn enumerate_cubic_regions(lattice: &Lattice, max_volume: usize) -> Vec<Region> {
    let dim = lattice.dim();
    let side = lattice.side();
    let mut regions = Vec::new();
    let n_offsets = side.pow(dim as u32);
    for o in 0..n_offsets {
        // decode with axis 1 slowest so the offset vectors come out in
        // lexicographic order
        let mut offset = vec![0; dim];
        let mut rem = o;
        for j in (0..dim).rev() {
            offset[j] = rem % side;
            rem /= side;
        }
        let room: Vec<usize> = offset.iter().map(|&oj| side - oj).collect();
        let mut lengths = vec![1; dim];
        'lengths: loop {
            let region = Region {
                offset: offset.clone(),
                lengths: lengths.clone(),
            };
            if region.volume() <= max_volume {
                regions.push(region);
            }
            let mut j = dim;
            loop {
                if j == 0 {
                    break 'lengths;
                }
                j -= 1;
                lengths[j] += 1;
                if lengths[j] <= room[j] {
                    break;
                }
                lengths[j] = 1;
            }
        }
    }
    regions
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn boundary_symmetric_under_length_permutation(
            mut lengths in proptest::collection::vec(1usize..5, 1..4),
        ) {
            let dim = lengths.len();
            let lattice = Lattice::new(dim, 4, 3).unwrap();
            let r1 = Region::new(&lattice, vec![0; dim], lengths.clone()).unwrap();
            lengths.reverse();
            let r2 = Region::new(&lattice, vec![0; dim], lengths).unwrap();
            prop_assert_eq!(r1.boundary(), r2.boundary());
        }

        #[test]
        fn coords_roundtrip(dim in 1usize..4, side in 1usize..5, salt in 0usize..1000) {
            let l = Lattice::new(dim, side, 3).unwrap();
            let site = salt % l.n_sites();
            prop_assert_eq!(l.site_index(&l.site_coords(site)), site);
        }

        #[test]
        fn translations_commute(side in 2usize..5, s1 in 0usize..4, s2 in 0usize..4) {
            let l = Lattice::new(2, side, 3).unwrap();
            let a = l.translation(1, s1 % side).unwrap();
            let b = l.translation(2, s2 % side).unwrap();
            prop_assert_eq!(a.then(&b).unwrap(), b.then(&a).unwrap());
        }
    }
}
