//! IPv4 CIDR blocks and merged address-interval sets.

use alloc::vec::Vec;
use core::fmt;
use core::net::Ipv4Addr;
use core::str::FromStr;

/// Size of the IPv4 address space.
pub const IPV4_SPACE: u64 = 1 << 32;

/// An IPv4 CIDR block. Host bits are cleared on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ipv4Cidr {
    network: u32,
    len: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CidrError {
    #[error("missing '/' in CIDR block")]
    MissingSlash,
    #[error("invalid IPv4 address")]
    Address,
    #[error("invalid prefix length")]
    Length,
}

impl Ipv4Cidr {
    pub fn new(addr: Ipv4Addr, len: u8) -> Result<Self, CidrError> {
        if len > 32 {
            return Err(CidrError::Length);
        }
        let mask = if len == 0 { 0 } else { u32::MAX << (32 - len) };
        Ok(Ipv4Cidr {
            network: u32::from(addr) & mask,
            len,
        })
    }

    pub fn network(&self) -> Ipv4Addr {
        Ipv4Addr::from(self.network)
    }

    pub fn prefix_len(&self) -> u8 {
        self.len
    }

    /// Number of addresses in the block.
    pub fn size(&self) -> u64 {
        1u64 << (32 - u32::from(self.len))
    }

    /// Half-open interval `[start, end)` covered by the block.
    pub fn interval(&self) -> (u64, u64) {
        let start = u64::from(self.network);
        (start, start + self.size())
    }
}

impl FromStr for Ipv4Cidr {
    type Err = CidrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (addr, len) = s.trim().split_once('/').ok_or(CidrError::MissingSlash)?;
        let addr = Ipv4Addr::from_str(addr).map_err(|_| CidrError::Address)?;
        let len = len.parse::<u8>().map_err(|_| CidrError::Length)?;
        Ipv4Cidr::new(addr, len)
    }
}

impl fmt::Display for Ipv4Cidr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.network(), self.len)
    }
}

/// A set of IPv4 addresses stored as sorted, disjoint, non-adjacent half-open
/// intervals over `[0, 2^32)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixSet {
    intervals: Vec<(u64, u64)>,
}

impl PrefixSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_cidrs<'a>(cidrs: impl IntoIterator<Item = &'a Ipv4Cidr>) -> Self {
        let mut raw: Vec<(u64, u64)> = cidrs.into_iter().map(Ipv4Cidr::interval).collect();
        raw.sort_unstable();
        let mut set = PrefixSet::new();
        for (s, e) in raw {
            set.push_sorted(s, e);
        }
        set
    }

    // Appends an interval whose start is >= every existing start.
    fn push_sorted(&mut self, start: u64, end: u64) {
        if start >= end {
            return;
        }
        match self.intervals.last_mut() {
            Some(last) if start <= last.1 => last.1 = last.1.max(end),
            _ => self.intervals.push((start, end)),
        }
    }

    pub fn intervals(&self) -> &[(u64, u64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Number of addresses in the set.
    pub fn size(&self) -> u64 {
        self.intervals.iter().map(|(s, e)| e - s).sum()
    }

    pub fn union(&self, other: &PrefixSet) -> PrefixSet {
        let mut out = PrefixSet {
            intervals: Vec::with_capacity(self.intervals.len() + other.intervals.len()),
        };
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() || j < other.intervals.len() {
            let take_left = match (self.intervals.get(i), other.intervals.get(j)) {
                (Some(a), Some(b)) => a <= b,
                (Some(_), None) => true,
                _ => false,
            };
            let (s, e) = if take_left {
                i += 1;
                self.intervals[i - 1]
            } else {
                j += 1;
                other.intervals[j - 1]
            };
            out.push_sorted(s, e);
        }
        out
    }

    pub fn union_with(&mut self, other: &PrefixSet) {
        *self = self.union(other);
    }

    /// Size of `self ∪ other` without materializing it.
    pub fn union_size(&self, other: &PrefixSet) -> u64 {
        self.union(other).size()
    }

    /// `true` if every address of `other` is in `self`.
    pub fn contains_set(&self, other: &PrefixSet) -> bool {
        self.union(other) == *self
    }
}
