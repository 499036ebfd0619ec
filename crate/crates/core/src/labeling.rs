//! Binary labelings of colorings in which every color pair forms a 4-cycle
//! factor.
//!
//! Such a coloring of K_{2^n} is the group-table coloring of Z_2^n in
//! disguise: there is a bijection `label: V -> {0,1}^n` and a bijection
//! `sigma` from nonzero vectors to colors with
//! `color(u, v) = sigma(label(u) ^ label(v))`.

use crate::coloring::{Color, ColoringError, EdgeColoring, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryLabeling {
    bits: u32,
    label: Vec<usize>,
    vertex_of: Vec<Vertex>,
    // sigma[x] for x in 1..2^n; sigma[0] is unused
    sigma: Vec<Color>,
}

impl BinaryLabeling {
    /// Number of coordinates `n`, with `N = 2^n`.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn label(&self, v: Vertex) -> usize {
        self.label[v]
    }

    /// Inverse of [`label`](Self::label).
    pub fn vertex(&self, label: usize) -> Vertex {
        self.vertex_of[label]
    }

    /// Color assigned to a nonzero difference vector.
    pub fn sigma(&self, x: usize) -> Color {
        assert!(x != 0, "sigma is undefined at the zero vector");
        self.sigma[x]
    }

    /// Vertices ordered by label.
    pub fn vertices_by_label(&self) -> &[Vertex] {
        &self.vertex_of
    }

    /// Recomputes `color(u, v) == sigma(label(u) ^ label(v))` for every pair.
    pub fn check(&self, phi: &EdgeColoring) -> Result<(), ColoringError> {
        let n = phi.order();
        for u in 0..n {
            for v in u + 1..n {
                if phi.color(u, v) != self.sigma(self.label[u] ^ self.label[v]) {
                    return Err(ColoringError::StructureViolation { u, v });
                }
            }
        }
        Ok(())
    }
}

/// Builds the labeling by repeated doubling.
///
/// Starting from `H = {0}` with label 0, each round takes the smallest color
/// not used inside the current clique `H`, maps `H` across that color's
/// matching to a disjoint clique `H'`, and sets a fresh high bit on the images.
/// The finished labeling is checked on every pair.
pub fn binary_labeling(phi: &EdgeColoring) -> Result<BinaryLabeling, ColoringError> {
    let n = phi.order();
    if !n.is_power_of_two() {
        return Err(ColoringError::NotPowerOfTwo(n));
    }
    let bits = n.trailing_zeros();
    let mut label = vec![usize::MAX; n];
    let mut clique: Vec<Vertex> = vec![0];
    label[0] = 0;
    let mut used = vec![false; phi.num_colors()];
    for h in 0..bits {
        let doubling = match used.iter().position(|u| !u) {
            Some(c) => Color::from_index(c),
            None => {
                // every color already appears inside H: H cannot be a closed subclique
                return Err(ColoringError::StructureViolation { u: clique[0], v: clique[1] });
            }
        };
        let size = clique.len();
        for i in 0..size {
            let x = clique[i];
            let y = phi.inverse_at(x, doubling);
            if label[y] != usize::MAX {
                return Err(ColoringError::StructureViolation { u: x, v: y });
            }
            label[y] = i | (1 << h);
            clique.push(y);
        }
        for i in 0..clique.len() {
            for j in i + 1..clique.len() {
                used[phi.color(clique[i], clique[j]).index()] = true;
            }
        }
    }
    let mut sigma = vec![Color(u16::MAX); n];
    for v in 1..n {
        sigma[label[v]] = phi.color(0, v);
    }
    let out = BinaryLabeling { bits, label, vertex_of: clique, sigma };
    out.check(phi)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{random_relabel, round_robin_coloring, xor_coloring};

    /// Rewrites `phi` through the labeling; must reproduce the XOR table.
    fn normalized(phi: &EdgeColoring, lab: &BinaryLabeling) -> Vec<Vec<i64>> {
        let n = phi.order();
        let mut inv_sigma = vec![0usize; n - 1];
        for x in 1..n {
            inv_sigma[lab.sigma(x).index()] = x;
        }
        let mut t = vec![vec![-1i64; n]; n];
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    t[lab.label(u)][lab.label(v)] = inv_sigma[phi.color(u, v).index()] as i64 - 1;
                }
            }
        }
        t
    }

    #[test]
    fn xor_coloring_labels() {
        for n in [4, 8, 16, 32] {
            let phi = xor_coloring(n).unwrap();
            let lab = binary_labeling(&phi).unwrap();
            assert_eq!(lab.bits(), n.trailing_zeros());
            lab.check(&phi).unwrap();
            assert_eq!(normalized(&phi, &lab), xor_coloring(n).unwrap().to_matrix());
        }
    }

    #[test]
    fn relabeled_colorings_normalize_to_xor() {
        for seed in 0..20 {
            let phi = random_relabel(&xor_coloring(16).unwrap(), seed);
            let lab = binary_labeling(&phi).unwrap();
            assert_eq!(lab.label(0), 0);
            assert_eq!(normalized(&phi, &lab), xor_coloring(16).unwrap().to_matrix());
        }
    }

    #[test]
    fn non_power_of_two_rejected() {
        let phi = round_robin_coloring(3).unwrap();
        assert_eq!(binary_labeling(&phi), Err(ColoringError::NotPowerOfTwo(6)));
    }

    #[test]
    fn broken_structure_detected() {
        // circle method on K_8 has long bichromatic cycles
        let phi = round_robin_coloring(4).unwrap();
        assert!(matches!(binary_labeling(&phi), Err(ColoringError::StructureViolation { .. })));
    }
}
