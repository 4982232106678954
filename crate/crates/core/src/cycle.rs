//! Edge-colored oriented cycles and their color-respecting symmetries.
//!
//! Edge `e_i` joins `v_i` and `v_{i+1}`; every index is taken modulo `n`.

use serde::{Deserialize, Serialize};

/// Orientation of an edge as an element of F_3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    Backward,
    Neutral,
    Forward,
}

impl Orientation {
    pub fn negated(self) -> Orientation {
        match self {
            Orientation::Forward => Orientation::Backward,
            Orientation::Backward => Orientation::Forward,
            Orientation::Neutral => Orientation::Neutral,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Orientation::Backward => -1,
            Orientation::Neutral => 0,
            Orientation::Forward => 1,
        }
    }
}

/// Orientation plus undirected color label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectedColor {
    pub orientation: Orientation,
    pub color: usize,
}

impl DirectedColor {
    pub fn new(orientation: Orientation, color: usize) -> Self {
        DirectedColor { orientation, color }
    }

    /// Flips the orientation, keeps the label.
    #[inline]
    pub fn bar(self) -> DirectedColor {
        DirectedColor {
            orientation: self.orientation.negated(),
            color: self.color,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColoredCycle {
    edges: Vec<DirectedColor>,
}

impl ColoredCycle {
    pub fn new(edges: Vec<DirectedColor>) -> Self {
        ColoredCycle { edges }
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[DirectedColor] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> DirectedColor {
        self.edges[i]
    }

    /// Edge color at a possibly negative or overflowing index.
    #[inline]
    pub fn at(&self, i: isize) -> DirectedColor {
        let n = self.edges.len() as isize;
        self.edges[i.rem_euclid(n) as usize]
    }

    /// Whether `v_x -> v_{x+t}` is color respecting.
    pub fn is_rotation(&self, t: isize) -> bool {
        let n = self.n() as isize;
        (0..n).all(|x| self.at(x + t) == self.at(x))
    }

    /// Whether `v_x -> v_{i-x}` is color respecting. The image of `e_x` is
    /// `e_{i-x-1}` traversed backwards.
    pub fn is_reflection(&self, i: isize) -> bool {
        let n = self.n() as isize;
        (0..n).all(|x| self.at(x) == self.at(i - x - 1).bar())
    }

    /// `c(e_{2k}) = c_0` and `c(e_{2k+1}) = c_1` for every k, indices mod n.
    /// For odd `n` this forces a constant coloring.
    pub fn is_alternating(&self) -> bool {
        let n = self.n() as isize;
        (0..n).all(|x| self.at(x) == self.at(x + 2))
    }

    pub fn all_neutral(&self) -> bool {
        self.edges
            .iter()
            .all(|e| e.orientation == Orientation::Neutral)
    }
}

/// All `t` in `1..=n` such that rotating by `t` is color respecting.
pub fn find_rotations(c: &ColoredCycle) -> Vec<usize> {
    (1..=c.n()).filter(|&t| c.is_rotation(t as isize)).collect()
}

/// All axes `i` in `0..n` such that `v_x -> v_{i-x}` is color respecting.
pub fn find_reflections(c: &ColoredCycle) -> Vec<usize> {
    (0..c.n()).filter(|&i| c.is_reflection(i as isize)).collect()
}

/// Local rotation condition: for every `s`, the edge pair around `v_{i+s}`
/// matches the pair around `v_{j+s}` either directly or reversed and barred.
pub fn check_rotation_hypothesis(c: &ColoredCycle, i: usize, j: usize) -> bool {
    let n = c.n() as isize;
    let (i, j) = (i as isize, j as isize);
    (0..n).all(|s| {
        let direct = c.at(i + s - 1) == c.at(j + s - 1) && c.at(i + s) == c.at(j + s);
        let flipped =
            c.at(i + s - 1) == c.at(j + s).bar() && c.at(i + s) == c.at(j + s - 1).bar();
        direct || flipped
    })
}

/// Local reflection condition around axis `i`.
pub fn check_reflection_hypothesis(c: &ColoredCycle, i: usize) -> bool {
    let n = c.n() as isize;
    let i = i as isize;
    (0..n).all(|s| {
        let direct = c.at(s - 1) == c.at(i - s - 1) && c.at(s) == c.at(i - s);
        let flipped = c.at(s - 1) == c.at(i - s).bar() && c.at(s) == c.at(i - s - 1).bar();
        direct || flipped
    })
}

/// Conclusion of the rotation statement for the pair `(i, j)`: the rotation
/// by `j - i` is color respecting, or the coloring is 2-periodic and every
/// edge is neutral.
pub fn rotation_conclusion(c: &ColoredCycle, i: usize, j: usize) -> bool {
    c.is_rotation(j as isize - i as isize) || (c.is_rotation(2) && c.all_neutral())
}

/// Conclusion of the reflection statement for axis `i`. Holds vacuously for
/// alternating colorings, which the statement excludes.
pub fn reflection_conclusion(c: &ColoredCycle, i: usize) -> bool {
    c.is_alternating() || c.is_reflection(i as isize)
}
