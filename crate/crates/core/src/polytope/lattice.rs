use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{affine_dim, Polytope};
use crate::kernel::{Rat, RatMat, RatVec};

/// Half-spaces of `k·P` with integer coefficients, for fast membership scans.
struct IntegerCuts {
    normals: Vec<Vec<i128>>,
    rhs: Vec<i128>,
}

impl IntegerCuts {
    fn new(p: &Polytope, k: u64) -> Self {
        let mut normals = Vec::new();
        let mut rhs = Vec::new();
        for h in p.halfspaces() {
            let lcm = h.normal.iter().fold(h.rhs.denom(), |acc, c| acc.lcm(&c.denom()));
            let s = Rat::from_bigint(lcm);
            normals
                .push(h.normal.iter().map(|c| (c * &s).numer().to_i128().expect("small polytope")).collect());
            let b = (&h.rhs * &s) * Rat::from_int(k as i64);
            rhs.push(b.numer().to_i128().expect("small polytope"));
        }
        IntegerCuts { normals, rhs }
    }

    fn contains(&self, z: &[i64]) -> bool {
        self.normals
            .iter()
            .zip(&self.rhs)
            .all(|(a, b)| a.iter().zip(z).map(|(ai, zi)| ai * *zi as i128).sum::<i128>() <= *b)
    }
}

impl Polytope {
    /// Integer bounding box of `k·P`, per coordinate.
    fn scaled_box(&self, k: u64) -> Vec<(i64, i64)> {
        let kr = Rat::from_int(k as i64);
        (0..self.dim())
            .map(|i| {
                let vals = self.vertices().iter().map(|v| &v[i] * &kr);
                let lo = vals.clone().min().expect("vertices").ceil();
                let hi = vals.max().expect("vertices").floor();
                (lo.to_i64().expect("small polytope"), hi.to_i64().expect("small polytope"))
            })
            .collect()
    }

    fn scan(&self, k: u64, mut visit: impl FnMut(&[i64])) {
        assert!(k > 0, "dilation factor must be positive");
        let bx = self.scaled_box(k);
        if bx.iter().any(|(lo, hi)| lo > hi) {
            return;
        }
        let cuts = IntegerCuts::new(self, k);
        let mut z: Vec<i64> = bx.iter().map(|b| b.0).collect();
        loop {
            if cuts.contains(&z) {
                visit(&z);
            }
            // Odometer with the last coordinate fastest, giving lexicographic order.
            let mut i = self.dim();
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if z[i] < bx[i].1 {
                    z[i] += 1;
                    break;
                }
                z[i] = bx[i].0;
            }
        }
    }

    /// Points of `(1/k)ℤⁿ ∩ P` in lexicographic order.
    pub fn lattice_points(&self, k: u64) -> Vec<RatVec> {
        let mut out = Vec::new();
        let k = k as i64;
        self.scan(k as u64, |z| out.push(z.iter().map(|&c| Rat::new(c, k)).collect()));
        out
    }

    /// `|kP ∩ ℤⁿ|`.
    pub fn ehrhart_count(&self, k: u64) -> u64 {
        let mut n = 0;
        self.scan(k, |_| n += 1);
        n
    }

    /// Euclidean volume, by a pulling triangulation along the face structure.
    pub fn volume(&self) -> Rat {
        let all: Vec<usize> = (0..self.vertices().len()).collect();
        let mut simplices = Vec::new();
        self.triangulate(&all, self.dim(), &mut Vec::new(), &mut simplices);
        let mut total = Rat::zero();
        for s in &simplices {
            let base = &self.vertices()[s[0]];
            let rows: Vec<RatVec> = s[1..].iter().map(|&i| &self.vertices()[i] - base).collect();
            total += RatMat::from_rows(rows).expect("uniform dimension").det().expect("square").abs();
        }
        let fact = (1..=self.dim() as i64).product::<i64>();
        &total / &Rat::from_int(fact)
    }

    /// Pulls the least vertex of `face` (dimension `d`) to every facet of the
    /// face that avoids it. `apexes` collects the vertices pulled so far.
    fn triangulate(&self, face: &[usize], d: usize, apexes: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if face.len() == d + 1 {
            let mut s = apexes.clone();
            s.extend_from_slice(face);
            out.push(s);
            return;
        }
        let apex = face[0];
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for h in 0..self.halfspaces().len() {
            let sub: Vec<usize> =
                face.iter().copied().filter(|&v| self.tight_sets()[v].contains(&h)).collect();
            if sub.contains(&apex) || seen.contains(&sub) {
                continue;
            }
            let pts: Vec<&RatVec> = sub.iter().map(|&v| &self.vertices()[v]).collect();
            if affine_dim(&pts) == Some(d - 1) {
                apexes.push(apex);
                self.triangulate(&sub, d - 1, apexes, out);
                apexes.pop();
                seen.push(sub);
            }
        }
    }
}

/// Exact Newton interpolation: the unique polynomial of degree `< xs.len()`
/// through the given points, returned as coefficients `c_0 + c_1 x + ...`.
pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> Vec<Rat> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut dd: Vec<Rat> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = &(&dd[i] - &dd[i - 1]) / &(&xs[i] - &xs[i - j]);
        }
    }
    // Expand the Newton form into monomial coefficients.
    let mut coeffs = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![Rat::zero(); n];
        for (d, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if d + 1 < n {
                next[d + 1] += c.clone();
            }
            next[d] -= c * &xs[i];
        }
        next[0] += dd[i].clone();
        coeffs = next;
    }
    coeffs
}

pub fn evaluate(coeffs: &[Rat], x: &Rat) -> Rat {
    coeffs.iter().rev().fold(Rat::zero(), |acc, c| &(&acc * x) + c)
}
