use std::collections::BTreeMap;

use super::spin::Spin;
use super::volume::{Site, Volume};
use crate::rng;

/// Seeded i.i.d. symmetric ±1 field over sites and bonds.
///
/// Values are read from counter-based streams, so the field is defined on
/// all of Z (or Z²) at once and larger volumes read the same values as the
/// smaller volumes they contain. Explicit overrides replace individual site
/// or bond values, which is how hand-written disorder is expressed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisorderRealization {
    seed: u64,
    flipped: bool,
    sites: BTreeMap<Site, Spin>,
    bonds: BTreeMap<(Site, Site), Spin>,
}

fn bond_key(a: Site, b: Site) -> (Site, Site) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn pack(s: Site) -> u64 {
    (s.x as u64).rotate_left(32) ^ (s.y as u64)
}

impl DisorderRealization {
    pub fn seeded(seed: u64) -> Self {
        DisorderRealization {
            seed,
            flipped: false,
            sites: BTreeMap::new(),
            bonds: BTreeMap::new(),
        }
    }

    /// Site values for the interior of `volume` (enumeration order); all
    /// other sites and bonds come from seed 0.
    pub fn from_site_values(volume: &Volume, values: &[Spin]) -> crate::Result<Self> {
        if values.len() != volume.site_count() {
            return Err(crate::Error::DimensionMismatch {
                what: "site disorder",
                expected: volume.site_count(),
                got: values.len(),
            });
        }
        let mut d = Self::seeded(0);
        for (site, v) in volume.sites().zip(values) {
            d.sites.insert(site, *v);
        }
        Ok(d)
    }

    pub fn with_site(mut self, site: Site, value: Spin) -> Self {
        self.sites.insert(site, value);
        self
    }

    pub fn with_bond(mut self, a: Site, b: Site, value: Spin) -> Self {
        self.bonds.insert(bond_key(a, b), value);
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn has_overrides(&self) -> bool {
        !(self.sites.is_empty() && self.bonds.is_empty())
    }

    /// The realization `−η`.
    pub fn flipped(&self) -> Self {
        DisorderRealization {
            seed: self.seed,
            flipped: !self.flipped,
            sites: self.sites.iter().map(|(k, v)| (*k, -*v)).collect(),
            bonds: self.bonds.iter().map(|(k, v)| (*k, -*v)).collect(),
        }
    }

    #[inline]
    fn orient(&self, minus: bool) -> Spin {
        Spin::from_minus_bit(minus ^ self.flipped)
    }

    pub fn site(&self, s: Site) -> Spin {
        if let Some(v) = self.sites.get(&s) {
            return *v;
        }
        if s.y == 0 {
            self.orient(rng::line_bit(self.seed, s.x))
        } else {
            self.orient(rng::plane_bit(self.seed, s.x, s.y))
        }
    }

    pub fn bond(&self, a: Site, b: Site) -> Spin {
        let key = bond_key(a, b);
        if let Some(v) = self.bonds.get(&key) {
            return *v;
        }
        let h = rng::mix(self.seed, rng::stream::BONDS, pack(key.0));
        self.orient(rng::splitmix64(h ^ pack(key.1)) & 1 == 1)
    }

    pub fn values_at(&self, sites: &[Site]) -> Vec<Spin> {
        sites.iter().map(|s| self.site(*s)).collect()
    }

    pub fn site_values(&self, volume: &Volume) -> Vec<Spin> {
        volume.sites().map(|s| self.site(s)).collect()
    }

    /// `Σ_k weights[k] · η(start + step·k)` along the line `y = 0`.
    pub fn line_dot(&self, start: i64, step: i64, weights: &[f64]) -> f64 {
        if self.has_overrides() {
            return weights
                .iter()
                .enumerate()
                .map(|(k, w)| w * self.site(Site::line(start + step * k as i64)).value())
                .sum();
        }
        let flip_mask: u64 = if self.flipped { 1 << 63 } else { 0 };
        let mut block = i64::MIN;
        let mut word = 0u64;
        let mut acc = 0.0f64;
        let mut x = start;
        for &w in weights {
            let b = x.div_euclid(64);
            if b != block {
                block = b;
                word = rng::line_word(self.seed, b);
            }
            // Move the site's bit onto the f64 sign bit.
            let bit = ((word >> x.rem_euclid(64)) & 1) << 63;
            acc += f64::from_bits(w.to_bits() ^ bit ^ flip_mask);
            x += step;
        }
        acc
    }
}
