//! Divisor classes on a toric surface: the Picard lattice presented by the
//! character exact sequence, the intersection form, positivity tests, and
//! line-bundle cohomology by exact lattice-point counting.

use num_rational::Ratio;

use crate::fan::{Fan, Vec2};
use crate::lattice::{cone_membership, Mat};
use crate::{Coord, Int, Rat};

/// Integer combination of the torus-invariant divisors, one coefficient per
/// ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusDivisor {
    pub coeffs: Vec<Coord>,
}

impl TorusDivisor {
    pub fn new(coeffs: Vec<Coord>) -> Self {
        TorusDivisor { coeffs }
    }

    pub fn zero(d: usize) -> Self {
        TorusDivisor { coeffs: vec![0; d] }
    }

    pub fn ray(d: usize, i: usize) -> Self {
        let mut coeffs = vec![0; d];
        coeffs[i] = 1;
        TorusDivisor { coeffs }
    }

    pub fn add(&self, other: &TorusDivisor) -> TorusDivisor {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        TorusDivisor {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &TorusDivisor) -> TorusDivisor {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        TorusDivisor {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: Coord) -> TorusDivisor {
        TorusDivisor { coeffs: self.coeffs.iter().map(|a| k * a).collect() }
    }
}

/// Coordinates of a divisor class in the chosen basis of the Picard group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub coords: Vec<Coord>,
}

impl DivisorClass {
    pub fn new(coords: Vec<Coord>) -> Self {
        DivisorClass { coords }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass { coords: vec![0; rank] }
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        assert_eq!(self.coords.len(), other.coords.len());
        DivisorClass {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        assert_eq!(self.coords.len(), other.coords.len());
        DivisorClass {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: Coord) -> DivisorClass {
        DivisorClass { coords: self.coords.iter().map(|a| k * a).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// The Picard group of the fan, presented on the basis of the classes of
/// `D_3, ..., D_d` (the two deleted rays form a lattice basis, so their
/// classes are eliminated by the two character relations).
#[derive(Clone, Debug)]
pub struct Picard {
    d: usize,
    basis_rays: Vec<usize>,
    ray_classes: Vec<DivisorClass>,
    q: Mat<Coord>,
    k_class: DivisorClass,
}

pub fn picard(fan: &Fan) -> Picard {
    let d = fan.ray_count();
    let rank = d - 2;
    let (v0, v1) = (fan.ray(0), fan.ray(1));
    debug_assert_eq!(v0.det(v1), 1);
    // Dual basis functionals of (v0, v1): m_k(u) = (V^-1 u)_k.
    let dual = |u: Vec2| -> (Coord, Coord) { (v1.y * u.x - v1.x * u.y, -v0.y * u.x + v0.x * u.y) };
    let mut ray_classes = Vec::with_capacity(d);
    for i in 0..d {
        let mut coords = vec![0; rank];
        if i >= 2 {
            coords[i - 2] = 1;
        } else {
            // D_k ~ -sum_{j>=3} <m_k, v_j> D_j from div(chi^{m_k}) = 0.
            for (slot, j) in (2..d).enumerate() {
                let (m0, m1) = dual(fan.ray(j));
                coords[slot] = if i == 0 { -m0 } else { -m1 };
            }
        }
        ray_classes.push(DivisorClass::new(coords));
    }
    let profile = fan.self_intersections();
    let table = |i: usize, j: usize| -> Coord {
        if i == j {
            profile[i]
        } else if (i + 1) % d == j || (j + 1) % d == i {
            1
        } else {
            0
        }
    };
    let q = Mat::from_fn(rank, rank, |a, b| table(a + 2, b + 2));
    let k_coords = {
        // K = -sum D_i projected to the basis.
        let mut acc = DivisorClass::zero(rank);
        for rc in &ray_classes {
            acc = acc.sub(rc);
        }
        acc
    };
    Picard { d, basis_rays: (2..d).collect(), ray_classes, q, k_class: k_coords }
}

impl Picard {
    pub fn rank(&self) -> usize {
        self.d - 2
    }

    pub fn ray_count(&self) -> usize {
        self.d
    }

    /// 0-based ray indices whose classes form the basis.
    pub fn basis_rays(&self) -> &[usize] {
        &self.basis_rays
    }

    pub fn ray_class(&self, i: usize) -> &DivisorClass {
        &self.ray_classes[i]
    }

    pub fn intersection_matrix(&self) -> &Mat<Coord> {
        &self.q
    }

    pub fn project(&self, td: &TorusDivisor) -> DivisorClass {
        assert_eq!(td.coeffs.len(), self.d);
        let mut acc = DivisorClass::zero(self.rank());
        for (i, &a) in td.coeffs.iter().enumerate() {
            if a != 0 {
                acc = acc.add(&self.ray_classes[i].scale(a));
            }
        }
        acc
    }

    pub fn lift(&self, class: &DivisorClass) -> TorusDivisor {
        assert_eq!(class.coords.len(), self.rank());
        let mut coeffs = vec![0; self.d];
        for (slot, &ray) in self.basis_rays.iter().enumerate() {
            coeffs[ray] = class.coords[slot];
        }
        TorusDivisor::new(coeffs)
    }

    /// Intersection number of two classes through the basis Gram matrix.
    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> Coord {
        let rank = self.rank();
        assert_eq!(a.coords.len(), rank);
        assert_eq!(b.coords.len(), rank);
        let mut acc = 0;
        for i in 0..rank {
            if a.coords[i] == 0 {
                continue;
            }
            for j in 0..rank {
                acc += a.coords[i] * self.q[(i, j)] * b.coords[j];
            }
        }
        acc
    }

    pub fn pair_ray(&self, a: &DivisorClass, ray: usize) -> Coord {
        self.pair(a, &self.ray_classes[ray])
    }

    pub fn canonical_class(&self) -> DivisorClass {
        self.k_class.clone()
    }

    pub fn anticanonical_class(&self) -> DivisorClass {
        self.k_class.scale(-1)
    }

    /// Riemann-Roch: chi(O(D)) = 1 + D.(D - K)/2.
    pub fn chi(&self, c: &DivisorClass) -> Coord {
        let num = self.pair(c, c) - self.pair(c, &self.k_class);
        assert!(num % 2 == 0, "intersection form broken: D.D - D.K is odd");
        1 + num / 2
    }

    /// Toric Nakai criterion: ample iff positive against every invariant
    /// curve.
    pub fn is_ample(&self, c: &DivisorClass) -> bool {
        (0..self.d).all(|i| self.pair_ray(c, i) > 0)
    }

    pub fn is_nef(&self, c: &DivisorClass) -> bool {
        (0..self.d).all(|i| self.pair_ray(c, i) >= 0)
    }

    /// Big iff the class lies in the interior of the cone spanned by the
    /// classes of the invariant divisors (the pseudoeffective cone).
    pub fn is_big(&self, c: &DivisorClass) -> bool {
        let gens: Vec<Vec<Rat>> = self
            .ray_classes
            .iter()
            .map(|rc| rc.coords.iter().map(|&x| Ratio::from_integer(Int::from(x))).collect())
            .collect();
        let x: Vec<Rat> = c.coords.iter().map(|&v| Ratio::from_integer(Int::from(v))).collect();
        cone_membership(&gens, &x, true).expect("class vectors share the Picard rank")
    }
}

/// `K = -sum_i D_i` as a torus divisor.
pub fn canonical_divisor(fan: &Fan) -> TorusDivisor {
    TorusDivisor::new(vec![-1; fan.ray_count()])
}

/// Intersection number straight from the adjacency table, without passing to
/// classes: `D_i . D_j` is 1 for adjacent rays, 0 for distinct non-adjacent
/// ones and the self-intersection on the diagonal.
pub fn intersect_divisors(fan: &Fan, a: &TorusDivisor, b: &TorusDivisor) -> Coord {
    let d = fan.ray_count();
    assert_eq!(a.coeffs.len(), d);
    assert_eq!(b.coeffs.len(), d);
    let profile = fan.self_intersections();
    let mut acc = 0;
    for i in 0..d {
        if a.coeffs[i] == 0 {
            continue;
        }
        acc += a.coeffs[i] * profile[i] * b.coeffs[i];
        acc += a.coeffs[i] * (b.coeffs[(i + 1) % d] + b.coeffs[(i + d - 1) % d]);
    }
    acc
}

pub fn chi_divisor(fan: &Fan, d: &TorusDivisor) -> Coord {
    let k = canonical_divisor(fan);
    let num = intersect_divisors(fan, d, d) - intersect_divisors(fan, d, &k);
    assert!(num % 2 == 0, "intersection form broken: D.D - D.K is odd");
    1 + num / 2
}

/// Number of lattice points of the polytope `P_D = { u : <u, v_i> >= -a_i }`,
/// i.e. `h^0(O(D))`. The polytope is bounded because the fan is complete;
/// vertices are enumerated exactly as pairwise facet intersections.
fn polytope_lattice_points(fan: &Fan, div: &TorusDivisor) -> usize {
    let d = fan.ray_count();
    assert_eq!(div.coeffs.len(), d);
    let rat = |n: Coord| -> Rat { Ratio::from_integer(Int::from(n)) };
    let satisfies_all = |ux: &Rat, uy: &Rat| -> bool {
        (0..d).all(|i| {
            let v = fan.ray(i);
            let lhs = rat(v.x) * ux + rat(v.y) * uy;
            lhs >= rat(-div.coeffs[i])
        })
    };
    let mut vertices: Vec<(Rat, Rat)> = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let (vi, vj) = (fan.ray(i), fan.ray(j));
            let det = vi.det(vj);
            if det == 0 {
                continue;
            }
            // Solve <u, v_i> = -a_i, <u, v_j> = -a_j.
            let (bi, bj) = (rat(-div.coeffs[i]), rat(-div.coeffs[j]));
            let ux = (&bi * rat(vj.y) - &bj * rat(vi.y)) / rat(det);
            let uy = (&bj * rat(vi.x) - &bi * rat(vj.x)) / rat(det);
            if satisfies_all(&ux, &uy) {
                vertices.push((ux, uy));
            }
        }
    }
    if vertices.is_empty() {
        return 0;
    }
    let to_coord = |r: &Int| -> Coord {
        use num_traits::ToPrimitive;
        r.to_i64().expect("polytope bounding box coordinate fits i64")
    };
    let xs: Vec<&Rat> = vertices.iter().map(|(x, _)| x).collect();
    let ys: Vec<&Rat> = vertices.iter().map(|(_, y)| y).collect();
    let min_x = to_coord(&xs.iter().min().unwrap().ceil().to_integer());
    let max_x = to_coord(&xs.iter().max().unwrap().floor().to_integer());
    let min_y = to_coord(&ys.iter().min().unwrap().ceil().to_integer());
    let max_y = to_coord(&ys.iter().max().unwrap().floor().to_integer());
    let mut count = 0;
    for mx in min_x..=max_x {
        for my in min_y..=max_y {
            let inside = (0..d).all(|i| {
                let v = fan.ray(i);
                v.x * mx + v.y * my >= -div.coeffs[i]
            });
            if inside {
                count += 1;
            }
        }
    }
    count
}

/// Cohomology dimensions `(h0, h1, h2)` of the line bundle `O(D)`:
/// `h0` counts sections via the polytope, `h2` is Serre-dual to `h0(K - D)`,
/// and `h1` closes the Euler characteristic.
pub fn cohomology(fan: &Fan, div: &TorusDivisor) -> (usize, usize, usize) {
    let h0 = polytope_lattice_points(fan, div);
    let k = canonical_divisor(fan);
    let h2 = polytope_lattice_points(fan, &k.sub(div));
    let chi = chi_divisor(fan, div);
    let h1 = (h0 as Coord) + (h2 as Coord) - chi;
    assert!(h1 >= 0, "negative h1: counting or Riemann-Roch is broken");
    (h0, h1 as usize, h2)
}

/// Dimensions of `(Hom, Ext^1, Ext^2)` between the line bundles `O(A)` and
/// `O(B)`: the cohomology of `O(B - A)`.
pub fn hom_complex_dims(
    fan: &Fan,
    pic: &Picard,
    a: &DivisorClass,
    b: &DivisorClass,
) -> (usize, usize, usize) {
    cohomology(fan, &pic.lift(&b.sub(a)))
}
