//! Complete smooth fans in a rank-2 lattice: validation, self-intersection
//! numbers, blow-ups and blow-downs, minimal models, lattice symmetries.
//!
//! Ray indices are 0-based in the API; every user-facing rendering (errors,
//! reports, the CLI) is 1-based to match the usual `D_1, ..., D_d` labels.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::lattice::Mat;
use crate::Coord;

pub mod census;
pub mod io;

pub use census::{census, CensusFilter};

/// Lattice point of the rank-2 cocharacter lattice.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vec2 {
    pub x: Coord,
    pub y: Coord,
}

impl Vec2 {
    pub const fn new(x: Coord, y: Coord) -> Self {
        Vec2 { x, y }
    }

    pub fn det(self, other: Vec2) -> Coord {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Vec2) -> Coord {
        self.x * other.x + self.y * other.y
    }

    pub fn scale(self, k: Coord) -> Vec2 {
        Vec2::new(k * self.x, k * self.y)
    }

    pub fn is_primitive(self) -> bool {
        num_integer::gcd(self.x, self.y) == 1
    }

    /// Strict "comes before in counterclockwise order" anchored at `anchor`,
    /// with `anchor` itself at angle zero.
    pub fn ccw_less(anchor: Vec2, a: Vec2, b: Vec2) -> bool {
        let half = |u: Vec2| -> u8 {
            let c = anchor.det(u);
            if c > 0 || (c == 0 && anchor.dot(u) > 0) {
                0
            } else {
                1
            }
        };
        let (ha, hb) = (half(a), half(b));
        if ha != hb {
            ha < hb
        } else {
            a.det(b) > 0
        }
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x + other.x, self.y + other.y)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn v2(x: Coord, y: Coord) -> Vec2 {
    Vec2::new(x, y)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("a fan needs at least 3 rays, got {count}")]
    TooFewRays { count: usize },
    #[error("ray {} = {ray} is not primitive", .index + 1)]
    NonPrimitiveRay { index: usize, ray: Vec2 },
    #[error("rays {} and {} are not in counterclockwise position", .index + 1, .index + 2)]
    NotCounterclockwise { index: usize },
    #[error("rays {} and {} span a non-smooth cone (determinant {det})", .index + 1, (.index + 1) % .count + 1)]
    NotSmooth { index: usize, count: usize, det: Coord },
    #[error("the rays do not cover the plane exactly once")]
    NotComplete,
    #[error("cone index {index} out of range (fan has {count} cones)")]
    InvalidConeIndex { index: usize, count: usize },
    #[error("ray {} has self-intersection {self_intersection}, not -1", .index + 1)]
    NotMinusOneCurve { index: usize, self_intersection: Coord },
}

/// A complete smooth fan: cyclically ordered primitive ray generators, in
/// strictly counterclockwise order, adjacent pairs forming lattice bases.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fan {
    rays: Vec<Vec2>,
}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fan[")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", r)?;
        }
        write!(f, "]")
    }
}

impl Fan {
    /// Validate a ray list. The input cyclic order and starting ray are kept
    /// exactly as given, so files round-trip bit for bit.
    pub fn validate(rays: Vec<Vec2>) -> Result<Fan, FanError> {
        let d = rays.len();
        if d < 3 {
            return Err(FanError::TooFewRays { count: d });
        }
        for (i, r) in rays.iter().enumerate() {
            if !r.is_primitive() {
                return Err(FanError::NonPrimitiveRay { index: i, ray: *r });
            }
        }
        for i in 0..d {
            let det = rays[i].det(rays[(i + 1) % d]);
            if det > 1 {
                return Err(FanError::NotSmooth { index: i, count: d, det });
            }
            if det < 1 {
                if i + 1 == d {
                    // The closing pair failing to turn means the rays do not
                    // wrap around.
                    return Err(FanError::NotComplete);
                }
                return Err(FanError::NotCounterclockwise { index: i });
            }
        }
        // All consecutive determinants are +1, so each step turns by less
        // than a half turn; a single full wrap is exactly the condition that
        // angles measured from the first ray strictly increase.
        for i in 2..d {
            if !Vec2::ccw_less(rays[0], rays[i - 1], rays[i]) {
                return Err(FanError::NotComplete);
            }
        }
        Ok(Fan { rays })
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec2] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> Vec2 {
        self.rays[i]
    }

    pub fn ray_index(&self, v: Vec2) -> Option<usize> {
        self.rays.iter().position(|&r| r == v)
    }

    /// The integer with `alpha_i * v_i = v_{i-1} + v_{i+1}`; the
    /// self-intersection of `D_i` is `-alpha_i`.
    pub fn alpha(&self, i: usize) -> Coord {
        let d = self.rays.len();
        let s = self.rays[(i + d - 1) % d] + self.rays[(i + 1) % d];
        let v = self.rays[i];
        let a = if v.x != 0 { s.x / v.x } else { s.y / v.y };
        assert!(v.scale(a) == s, "neighbor sum not a multiple of ray {}", i + 1);
        a
    }

    pub fn self_intersections(&self) -> Vec<Coord> {
        (0..self.rays.len()).map(|i| -self.alpha(i)).collect()
    }

    /// Cyclic product of the basis-change matrices with rows `(0, -1)` and
    /// `(1, alpha_i)`, in ray order. Identity on every valid fan.
    pub fn holonomy(&self) -> Mat<Coord> {
        let mut p = Mat::identity(2);
        for i in 0..self.rays.len() {
            p = &p * &alpha_matrix(self.alpha(i));
        }
        p
    }

    /// Whether adjacent rays `i` and `i+1` (cyclically) are both rays of
    /// self-intersection != -2; the hypothesis of the splitting criterion.
    pub fn has_non_minus_two_adjacent_pair(&self) -> bool {
        let d = self.rays.len();
        (0..d).any(|i| self.alpha(i) != 2 && self.alpha((i + 1) % d) != 2)
    }

    /// Subdivide the cone between rays `i` and `i+1` (cyclic), inserting
    /// their sum: the toric blow-up of the corresponding fixed point.
    pub fn blow_up(&self, cone: usize) -> Result<Fan, FanError> {
        let d = self.rays.len();
        if cone >= d {
            return Err(FanError::InvalidConeIndex { index: cone, count: d });
        }
        let w = self.rays[cone] + self.rays[(cone + 1) % d];
        let mut rays = self.rays.clone();
        rays.insert(cone + 1, w);
        debug_assert!(Fan::validate(rays.clone()).is_ok());
        Ok(Fan { rays })
    }

    /// Remove a ray of self-intersection -1 (contract the exceptional curve).
    pub fn blow_down(&self, ray: usize) -> Result<Fan, FanError> {
        let a = self.alpha(ray);
        if a != 1 {
            return Err(FanError::NotMinusOneCurve { index: ray, self_intersection: -a });
        }
        let mut rays = self.rays.clone();
        rays.remove(ray);
        debug_assert!(Fan::validate(rays.clone()).is_ok());
        Ok(Fan { rays })
    }

    /// Repeatedly blow down the first -1-ray until none remains. The base has
    /// 3 rays (a projective plane) or 4 rays (a Hirzebruch surface), and
    /// replaying the recorded steps reproduces `self` exactly.
    pub fn minimal_model(&self) -> MinimalModel {
        let mut current = self.clone();
        let mut removals: Vec<(usize, Vec2)> = Vec::new();
        loop {
            let d = current.ray_count();
            if d == 3 {
                break;
            }
            let Some(i) = (0..d).find(|&i| current.alpha(i) == 1) else { break };
            removals.push((i, current.ray(i)));
            current = current.blow_down(i).expect("ray was checked to be a -1-curve");
        }
        assert!(
            current.ray_count() <= 4,
            "no -1-ray on a fan with {} rays: {:?}",
            current.ray_count(),
            current
        );
        let steps = removals
            .into_iter()
            .rev()
            .map(|(position, inserted)| BlowUpStep { position, inserted })
            .collect();
        let mm = MinimalModel { base: current, steps };
        debug_assert_eq!(mm.replay(), *self);
        mm
    }

    /// All unimodular 2x2 matrices mapping the ray set to itself, found by
    /// sending the ordered pair `(v_1, v_2)` to each adjacent ray pair in
    /// both orientations and filtering.
    pub fn symmetries(&self) -> FanSymmetryGroup {
        let d = self.rays.len();
        let v0 = self.rays[0];
        let v1 = self.rays[1];
        // Inverse of [v0 v1] (columns); det is +1 by smoothness.
        let inv = [[v1.y, -v1.x], [-v0.y, v0.x]];
        let apply = |m: &[[Coord; 2]; 2], u: Vec2| -> Vec2 {
            Vec2::new(m[0][0] * u.x + m[0][1] * u.y, m[1][0] * u.x + m[1][1] * u.y)
        };
        let mut elements = Vec::new();
        for j in 0..d {
            for reversed in [false, true] {
                let (t0, t1) = if reversed {
                    (self.rays[(j + 1) % d], self.rays[j])
                } else {
                    (self.rays[j], self.rays[(j + 1) % d])
                };
                // g = [t0 t1] * [v0 v1]^-1
                let g = [
                    [t0.x * inv[0][0] + t1.x * inv[1][0], t0.x * inv[0][1] + t1.x * inv[1][1]],
                    [t0.y * inv[0][0] + t1.y * inv[1][0], t0.y * inv[0][1] + t1.y * inv[1][1]],
                ];
                let mut perm = Vec::with_capacity(d);
                let mut ok = true;
                for &r in &self.rays {
                    match self.ray_index(apply(&g, r)) {
                        Some(k) => perm.push(k),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    elements.push(FanSymmetry { matrix: g, perm });
                }
            }
        }
        FanSymmetryGroup { elements }
    }
}

fn alpha_matrix(a: Coord) -> Mat<Coord> {
    Mat::from_rows(vec![vec![0, -1], vec![1, a]])
}

/// One replay step of a blow-up trace: insert `inserted` at `position`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUpStep {
    pub position: usize,
    pub inserted: Vec2,
}

/// Result of [`Fan::minimal_model`]: replaying `steps` from `base` (inserting
/// each recorded ray at its recorded position) reproduces the analyzed fan
/// bit-exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalModel {
    pub base: Fan,
    pub steps: Vec<BlowUpStep>,
}

impl MinimalModel {
    pub fn replay(&self) -> Fan {
        let mut rays = self.base.rays.clone();
        for step in &self.steps {
            rays.insert(step.position, step.inserted);
        }
        Fan::validate(rays).expect("replayed trace must be a valid fan")
    }
}

/// A lattice automorphism preserving the ray set; `perm[i]` is the index of
/// the image of ray `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanSymmetry {
    pub matrix: [[Coord; 2]; 2],
    pub perm: Vec<usize>,
}

impl FanSymmetry {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn det(&self) -> Coord {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }
}

#[derive(Clone, Debug)]
pub struct FanSymmetryGroup {
    pub elements: Vec<FanSymmetry>,
}

impl FanSymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity_index(&self) -> usize {
        self.elements.iter().position(FanSymmetry::is_identity).expect("identity is a symmetry")
    }
}

/// The fan of the projective plane: rays (1,0), (0,1), (-1,-1).
pub fn projective_plane() -> Fan {
    Fan::validate(vec![v2(1, 0), v2(0, 1), v2(-1, -1)]).expect("P2 fan is valid")
}

/// The fan of the n-th Hirzebruch surface: rays (1,0), (0,1), (-1,n), (0,-1).
pub fn hirzebruch(n: u32) -> Fan {
    Fan::validate(vec![v2(1, 0), v2(0, 1), v2(-1, n as Coord), v2(0, -1)]).expect("F_n fan is valid")
}

/// Build a fan whose -2-chains have exactly the requested lengths.
///
/// A single run `v_0 = (1,0), v_1 = (0,1), v_{s+1} = 2 v_s - v_{s-1}` gives a
/// chain of any length with flanks of self-intersection != -2; the fan is
/// closed through the lower half plane. Several chains are produced by
/// building one long chain and blowing up interior cones, which sacrifices
/// the two curves at each split point.
pub fn chain_surface(lengths: &[u32]) -> Fan {
    assert!(!lengths.is_empty(), "at least one chain length required");
    assert!(lengths.iter().all(|&l| l >= 1), "chain lengths must be positive");
    let r = lengths.len();
    let total: u32 = lengths.iter().sum::<u32>() + 2 * (r as u32 - 1);
    let l = total as Coord;

    // Rays v_0 .. v_{l+1} with v_s = (1-s, s), then close the fan. The
    // closure ray (-1, 1) picks up self-intersection -l, so for l = 2 one
    // more subdivision keeps it out of the -2 locus.
    let mut rays: Vec<Vec2> = (0..=l + 1).map(|s| v2(1 - s, s)).collect();
    if l >= 2 {
        rays.push(v2(-1, 1));
    }
    if l == 2 {
        rays.push(v2(-1, 0));
    }
    rays.push(v2(0, -1));
    let mut fan = Fan::validate(rays).expect("chain closure is a valid fan");

    // Chain curves sit at ray positions 1..=l. Split after each requested
    // chain: blowing up the cone between chain positions p and p+1 turns both
    // into -3-curves. Every insertion shifts later positions by one.
    let mut split_at = Vec::new();
    let mut acc = 0;
    for &len in &lengths[..r - 1] {
        acc += len as usize + 2;
        split_at.push(acc - 1); // chain position of the first sacrificed curve
    }
    for (k, &p) in split_at.iter().enumerate() {
        // ray index of chain position p, shifted by k earlier insertions
        fan = fan.blow_up(p + k).expect("split cone index in range");
    }

    let mut got: Vec<usize> = chain_lengths_of(&fan);
    let mut want: Vec<usize> = lengths.iter().map(|&l| l as usize).collect();
    got.sort_unstable();
    want.sort_unstable();
    assert_eq!(got, want, "constructed fan has wrong chain lengths");
    fan
}

/// Multiset of maximal -2-run lengths; local helper so the constructor can
/// check itself without depending on the chain analysis module.
fn chain_lengths_of(fan: &Fan) -> Vec<usize> {
    let d = fan.ray_count();
    let delta: Vec<bool> = (0..d).map(|i| fan.alpha(i) == 2).collect();
    let mut lengths = Vec::new();
    let start = (0..d).find(|&i| !delta[i]).expect("not all rays are -2");
    let mut run = 0;
    for k in 1..=d {
        let i = (start + k) % d;
        if delta[i] {
            run += 1;
        } else if run > 0 {
            lengths.push(run);
            run = 0;
        }
    }
    lengths
}

/// Random fan produced by `steps` blow-ups at uniformly chosen cones.
pub fn random_blow_ups<R: Rng>(rng: &mut R, base: &Fan, steps: usize) -> Fan {
    let mut fan = base.clone();
    for _ in 0..steps {
        let cone = rng.random_range(0..fan.ray_count());
        fan = fan.blow_up(cone).expect("cone index in range");
    }
    fan
}

/// Random base (projective plane or a Hirzebruch surface with n <= 5) plus a
/// random number of blow-ups, capped at `max_rays` rays.
pub fn random_fan<R: Rng>(rng: &mut R, max_rays: usize) -> Fan {
    let base = match rng.random_range(0..7) {
        0 => projective_plane(),
        k => hirzebruch(k as u32 - 1),
    };
    let room = max_rays.saturating_sub(base.ray_count());
    let steps = rng.random_range(0..=room);
    random_blow_ups(rng, &base, steps)
}
