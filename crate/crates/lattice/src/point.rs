//! Lattice points, shift directions, and inclusive index windows.

use std::fmt;

/// One of the three independent lattice directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    N,
    M,
    H,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::N, Direction::M, Direction::H];
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::N => write!(f, "n"),
            Direction::M => write!(f, "m"),
            Direction::H => write!(f, "h"),
        }
    }
}

/// A point (n, m, h) of the three-dimensional lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub n: i64,
    pub m: i64,
    pub h: i64,
}

impl LatticePoint {
    pub fn new(n: i64, m: i64, h: i64) -> Self {
        LatticePoint { n, m, h }
    }

    pub fn coord(&self, dir: Direction) -> i64 {
        match dir {
            Direction::N => self.n,
            Direction::M => self.m,
            Direction::H => self.h,
        }
    }

    /// The point displaced `by` steps along `dir`.
    pub fn step(&self, dir: Direction, by: i64) -> LatticePoint {
        let mut p = *self;
        match dir {
            Direction::N => p.n += by,
            Direction::M => p.m += by,
            Direction::H => p.h += by,
        }
        p
    }

    /// The point displaced by (dn, dm, dh).
    pub fn shifted(&self, dn: i64, dm: i64, dh: i64) -> LatticePoint {
        LatticePoint {
            n: self.n + dn,
            m: self.m + dm,
            h: self.h + dh,
        }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.m, self.h)
    }
}

/// Inclusive index ranges per direction. Every lattice point touched during a
/// run (including shifted neighbours) must lie inside the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub n: (i64, i64),
    pub m: (i64, i64),
    pub h: (i64, i64),
}

impl Window {
    pub fn new(n: (i64, i64), m: (i64, i64), h: (i64, i64)) -> Self {
        Window { n, m, h }
    }

    pub fn range(&self, dir: Direction) -> (i64, i64) {
        match dir {
            Direction::N => self.n,
            Direction::M => self.m,
            Direction::H => self.h,
        }
    }

    /// Number of indices along `dir` (zero when the range is inverted).
    pub fn len(&self, dir: Direction) -> usize {
        let (lo, hi) = self.range(dir);
        if hi >= lo {
            (hi - lo + 1) as usize
        } else {
            0
        }
    }

    pub fn contains_index(&self, dir: Direction, index: i64) -> bool {
        let (lo, hi) = self.range(dir);
        lo <= index && index <= hi
    }

    pub fn contains(&self, point: &LatticePoint) -> bool {
        self.contains_index(Direction::N, point.n)
            && self.contains_index(Direction::M, point.m)
            && self.contains_index(Direction::H, point.h)
    }

    /// Iterates all points of the window in lexicographic (n, m, h) order.
    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        let (nlo, nhi) = self.n;
        let (mlo, mhi) = self.m;
        let (hlo, hhi) = self.h;
        (nlo..=nhi).flat_map(move |n| {
            (mlo..=mhi).flat_map(move |m| (hlo..=hhi).map(move |h| LatticePoint::new(n, m, h)))
        })
    }
}
