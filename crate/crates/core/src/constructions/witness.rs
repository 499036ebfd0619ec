use std::fmt;

use crate::coloring::{color_pair_cycles, Color, EdgeColoring, Vertex};

/// Path `x4 - x1 - x2 - x3` on a long alternating cycle of colors `a`, `b`:
/// `color(x1x2) = b`, `color(x2x3) = color(x1x4) = a`, and `c = color(x3x4)`
/// differs from both.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FourCycleWitness {
    pub x1: Vertex,
    pub x2: Vertex,
    pub x3: Vertex,
    pub x4: Vertex,
    pub a: Color,
    pub b: Color,
    pub c: Color,
}

impl fmt::Display for FourCycleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(x1,x2,x3,x4)=({},{},{},{}) a={} b={} c={}",
            self.x1, self.x2, self.x3, self.x4, self.a, self.b, self.c
        )
    }
}

impl FourCycleWitness {
    pub fn vertices(&self) -> [Vertex; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    pub fn validate(&self, phi: &EdgeColoring) -> Result<(), String> {
        let [x1, x2, x3, x4] = self.vertices();
        let n = phi.order();
        if self.vertices().iter().any(|&x| x >= n) {
            return Err("vertex out of range".into());
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if self.vertices()[i] == self.vertices()[j] {
                    return Err(format!("repeated vertex {}", self.vertices()[i]));
                }
            }
        }
        let checks = [
            (x1, x2, self.b, "x1x2"),
            (x2, x3, self.a, "x2x3"),
            (x1, x4, self.a, "x1x4"),
            (x3, x4, self.c, "x3x4"),
        ];
        for (u, v, want, name) in checks {
            if phi.color(u, v) != want {
                return Err(format!("color({name}) = {} != {want}", phi.color(u, v)));
            }
        }
        if self.c == self.a || self.c == self.b {
            return Err(format!("c = {} coincides with a or b", self.c));
        }
        Ok(())
    }
}

fn witness_at(phi: &EdgeColoring, x1: Vertex, a: Color, b: Color) -> FourCycleWitness {
    let x4 = phi.inverse_at(x1, a);
    let x2 = phi.inverse_at(x1, b);
    let x3 = phi.inverse_at(x2, a);
    FourCycleWitness { x1, x2, x3, x4, a, b, c: phi.color(x3, x4) }
}

/// Every witness, lazily: color pairs in lexicographic order, long cycles in
/// order of their smallest vertex, `x1` along the cycle, then the two role
/// assignments `(a, b) = (lo, hi)` and `(hi, lo)`.
pub fn four_cycle_witnesses(phi: &EdgeColoring) -> impl Iterator<Item = FourCycleWitness> + '_ {
    let k = phi.num_colors();
    (0..k)
        .flat_map(move |lo| (lo + 1..k).map(move |hi| (Color::from_index(lo), Color::from_index(hi))))
        .flat_map(move |(lo, hi)| {
            color_pair_cycles(phi, lo, hi)
                .cycles
                .into_iter()
                .filter(|cycle| cycle.len() > 4)
                .flatten()
                .flat_map(move |x1| [(lo, hi), (hi, lo)].map(|(a, b)| witness_at(phi, x1, a, b)))
        })
}

/// First witness in [`four_cycle_witnesses`] order, or `None` when every color
/// pair forms a 4-cycle factor.
pub fn find_four_cycle_witness(phi: &EdgeColoring) -> Option<FourCycleWitness> {
    four_cycle_witnesses(phi).next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{random_coloring, round_robin_coloring, xor_coloring};

    #[test]
    fn k6_circle_witness() {
        let phi = round_robin_coloring(3).unwrap();
        let w = find_four_cycle_witness(&phi).unwrap();
        assert_eq!(w.vertices(), [0, 2, 3, 5]);
        assert_eq!((w.a, w.b, w.c), (Color(0), Color(1), Color(3)));
        w.validate(&phi).unwrap();
    }

    #[test]
    fn xor_has_none() {
        assert_eq!(find_four_cycle_witness(&xor_coloring(8).unwrap()), None);
        assert_eq!(four_cycle_witnesses(&xor_coloring(16).unwrap()).count(), 0);
    }

    #[test]
    fn witnesses_validate_on_random_colorings() {
        for seed in 0..200 {
            let n = [6, 8, 10, 12, 20][seed as usize % 5];
            let phi = random_coloring(n, seed, 300).unwrap();
            for w in four_cycle_witnesses(&phi).take(50) {
                w.validate(&phi).unwrap();
            }
        }
    }
}
