//! Occupation-number bases for spinful fermions on a chain of `M` sites.
//!
//! Modes are ordered site-major with spin up before spin down, so
//! `mode(j, Up) = 2j` and `mode(j, Down) = 2j + 1`. A [`FockState`] stores
//! the occupation of mode `k` in bit `k`. Mode operators pick up the
//! Jordan-Wigner sign `(-1)^(occupied modes below the target)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported chain length (two modes per site in a `u32`).
pub const MAX_SITES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeOp {
    Create,
    Annihilate,
}

#[inline]
pub fn mode_index(site: usize, spin: Spin) -> usize {
    2 * site
        + match spin {
            Spin::Up => 0,
            Spin::Down => 1,
        }
}

/// Occupation bit pattern over `2M` fermionic modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FockState(pub u32);

impl FockState {
    pub const VACUUM: FockState = FockState(0);

    pub fn from_occupations(occupied: &[(usize, Spin)]) -> FockState {
        let bits = occupied
            .iter()
            .fold(0u32, |acc, &(site, spin)| acc | (1 << mode_index(site, spin)));
        FockState(bits)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn occupation(self, site: usize, spin: Spin) -> u32 {
        (self.0 >> mode_index(site, spin)) & 1
    }

    #[inline]
    pub fn particle_count(self) -> u32 {
        self.0.count_ones()
    }

    /// Number of particles with the given spin.
    pub fn spin_count(self, spin: Spin) -> u32 {
        let mask = match spin {
            Spin::Up => 0x5555_5555u32,
            Spin::Down => 0xAAAA_AAAAu32,
        };
        (self.0 & mask).count_ones()
    }

    #[inline]
    pub fn is_doubly_occupied(self, site: usize) -> bool {
        (self.0 >> (2 * site)) & 0b11 == 0b11
    }

    pub fn double_occupancy(self, sites: usize) -> u32 {
        (0..sites).filter(|&j| self.is_doubly_occupied(j)).count() as u32
    }

    /// Apply `c†` or `c` on one mode. Returns `None` when the result vanishes.
    pub fn apply(self, site: usize, spin: Spin, op: ModeOp) -> Option<(FockState, f64)> {
        let mode = mode_index(site, spin);
        let bit = 1u32 << mode;
        let occupied = self.0 & bit != 0;
        let next = match (op, occupied) {
            (ModeOp::Create, false) | (ModeOp::Annihilate, true) => self.0 ^ bit,
            _ => return None,
        };
        let below = (self.0 & (bit - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
        Some((FockState(next), sign))
    }

    /// Apply `c†_{to} c_{from}`; returns the new state and the fermionic sign.
    pub fn hop(
        self,
        to: (usize, Spin),
        from: (usize, Spin),
    ) -> Option<(FockState, f64)> {
        let (mid, s1) = self.apply(from.0, from.1, ModeOp::Annihilate)?;
        let (out, s2) = mid.apply(to.0, to.1, ModeOp::Create)?;
        Some((out, s1 * s2))
    }
}

impl fmt::Display for FockState {
    /// Renders as `|ud,u,0>` style site list.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sites = (32 - self.0.leading_zeros() as usize).div_ceil(2).max(1);
        write!(f, "|")?;
        for j in 0..sites {
            if j > 0 {
                write!(f, ",")?;
            }
            let s = match (self.occupation(j, Spin::Up), self.occupation(j, Spin::Down)) {
                (0, 0) => "0",
                (1, 0) => "u",
                (0, 1) => "d",
                _ => "ud",
            };
            write!(f, "{s}")?;
        }
        write!(f, ">")
    }
}

/// Which part of Fock space a [`Basis`] spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    /// All `4^M` occupation patterns.
    Full,
    /// Fixed `(N_up, N_down)`.
    Spin { up: usize, down: usize },
    /// Fixed total particle number; closed under every protocol gate.
    Particles(usize),
}

/// Ordered occupation basis with an index map.
#[derive(Debug, Clone)]
pub struct Basis {
    sites: usize,
    sector: Sector,
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.sites == other.sites && self.sector == other.sector
    }
}

impl Basis {
    /// Enumerate a basis in ascending bit-pattern order.
    pub fn new(sites: usize, sector: Sector) -> Result<Basis> {
        if sites == 0 || sites > MAX_SITES {
            return Err(Error::domain(format!(
                "site count must be in 1..={MAX_SITES}, got {sites}"
            )));
        }
        match sector {
            Sector::Spin { up, down } if up > sites || down > sites => {
                return Err(Error::domain(format!(
                    "sector ({up},{down}) invalid for {sites} sites"
                )))
            }
            Sector::Particles(n) if n > 2 * sites => {
                return Err(Error::domain(format!(
                    "particle number {n} invalid for {sites} sites"
                )))
            }
            _ => {}
        }
        let modes = 2 * sites as u32;
        let all = (0u64..(1u64 << modes)).map(|b| FockState(b as u32));
        let states: Vec<FockState> = match sector {
            Sector::Full => all.collect(),
            Sector::Spin { up, down } => all
                .filter(|s| {
                    s.spin_count(Spin::Up) as usize == up && s.spin_count(Spin::Down) as usize == down
                })
                .collect(),
            Sector::Particles(n) => all.filter(|s| s.particle_count() as usize == n).collect(),
        };
        let index = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Ok(Basis {
            sites,
            sector,
            states,
            index,
        })
    }

    pub fn full(sites: usize) -> Result<Basis> {
        Basis::new(sites, Sector::Full)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> FockState {
        self.states[i]
    }

    pub fn index_of(&self, state: FockState) -> Option<usize> {
        self.index.get(&state).copied()
    }

    pub fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.sites {
            Err(Error::domain(format!(
                "site {site} out of range for {} sites",
                self.sites
            )))
        } else {
            Ok(())
        }
    }

    /// Total-particle-number blocks that together tile the full space.
    pub fn particle_blocks(sites: usize) -> Result<Vec<Basis>> {
        (0..=2 * sites)
            .map(|n| Basis::new(sites, Sector::Particles(n)))
            .collect()
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
