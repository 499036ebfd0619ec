//! Simultaneous search for `k` disjoint transversals of a latin square of
//! order at most 64. Every (transversal, row), (transversal, column) and
//! (transversal, symbol) pair must be covered exactly once and no cell twice;
//! live options are tracked in bitsets.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const MAX_ORDER: usize = 64;

pub(crate) enum Outcome {
    Found(Vec<Vec<usize>>),
    Absent,
    Aborted,
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub(crate) struct Search {
    q: usize,
    k: usize,
    grid: Vec<usize>,   // [r * q + c] = symbol
    col_of: Vec<usize>, // [r * q + s] = column
    row_of: Vec<usize>, // [c * q + s] = row
    col_free: Vec<u64>, // [t]
    row_free: Vec<u64>, // [t]
    sym_free: Vec<u64>, // [t]
    cell_free_in_row: Vec<u64>,
    cell_free_in_col: Vec<u64>,
    sym_col: Vec<u64>, // [t * q + r]: columns of row r whose symbol t may still use
    sym_row: Vec<u64>, // [t * q + c]: rows of column c whose symbol t may still use
    assign: Vec<usize>,
    remaining: usize,
    rng: Option<ChaCha8Rng>,
    nodes: u64,
    node_limit: u64,
}

#[derive(Copy, Clone)]
enum Item {
    Row(usize, usize),
    Col(usize, usize),
    Sym(usize, usize),
}

impl Search {
    pub(crate) fn new(rows: &[Vec<usize>], k: usize, seed: Option<u64>, node_limit: u64) -> Self {
        let q = rows.len();
        assert!(q <= MAX_ORDER, "transversal search supports orders up to {MAX_ORDER}");
        let full = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
        let mut grid = vec![0; q * q];
        let mut col_of = vec![0; q * q];
        let mut row_of = vec![0; q * q];
        for r in 0..q {
            for c in 0..q {
                let s = rows[r][c];
                grid[r * q + c] = s;
                col_of[r * q + s] = c;
                row_of[c * q + s] = r;
            }
        }
        Search {
            q,
            k,
            grid,
            col_of,
            row_of,
            col_free: vec![full; k],
            row_free: vec![full; k],
            sym_free: vec![full; k],
            cell_free_in_row: vec![full; q],
            cell_free_in_col: vec![full; q],
            sym_col: vec![full; k * q],
            sym_row: vec![full; k * q],
            assign: vec![usize::MAX; k * q],
            remaining: k * q,
            rng: seed.map(ChaCha8Rng::seed_from_u64),
            nodes: 0,
            node_limit,
        }
    }

    fn toggle(&mut self, t: usize, r: usize, c: usize, on: bool) {
        let q = self.q;
        let s = self.grid[r * q + c];
        let flip = |m: &mut u64, i: usize| *m ^= 1 << i;
        flip(&mut self.col_free[t], c);
        flip(&mut self.row_free[t], r);
        flip(&mut self.sym_free[t], s);
        flip(&mut self.cell_free_in_row[r], c);
        flip(&mut self.cell_free_in_col[c], r);
        for i in 0..q {
            flip(&mut self.sym_col[t * q + i], self.col_of[i * q + s]);
            flip(&mut self.sym_row[t * q + i], self.row_of[i * q + s]);
        }
        if on {
            self.assign[t * q + r] = c;
            self.remaining -= 1;
        } else {
            self.assign[t * q + r] = usize::MAX;
            self.remaining += 1;
        }
    }

    fn open(&self, t: usize, r: usize, c: usize) -> bool {
        self.row_free[t] >> r & 1 == 1
            && self.col_free[t] >> c & 1 == 1
            && self.cell_free_in_row[r] >> c & 1 == 1
            && self.sym_free[t] >> self.grid[r * self.q + c] & 1 == 1
    }

    fn count(&self, item: Item) -> u32 {
        let q = self.q;
        match item {
            Item::Row(t, r) => {
                (self.col_free[t] & self.cell_free_in_row[r] & self.sym_col[t * q + r]).count_ones()
            }
            Item::Col(t, c) => {
                (self.row_free[t] & self.cell_free_in_col[c] & self.sym_row[t * q + c]).count_ones()
            }
            Item::Sym(t, s) => {
                bits(self.row_free[t]).filter(|&r| self.open(t, r, self.col_of[r * q + s])).count() as u32
            }
        }
    }

    fn options(&self, item: Item) -> Vec<(usize, usize, usize)> {
        let q = self.q;
        match item {
            Item::Row(t, r) => bits(self.col_free[t] & self.cell_free_in_row[r] & self.sym_col[t * q + r])
                .map(|c| (t, r, c))
                .collect(),
            Item::Col(t, c) => bits(self.row_free[t] & self.cell_free_in_col[c] & self.sym_row[t * q + c])
                .map(|r| (t, r, c))
                .collect(),
            Item::Sym(t, s) => bits(self.row_free[t])
                .map(|r| (t, r, self.col_of[r * q + s]))
                .filter(|&(t, r, c)| self.open(t, r, c))
                .collect(),
        }
    }

    /// Item with the fewest live options; `None` when some item has none.
    fn choose(&self) -> Option<Item> {
        let k = self.k;
        let mut best = (u32::MAX, Item::Row(0, 0));
        let mut consider = |item: Item| -> Option<bool> {
            let n = self.count(item);
            if n == 0 {
                return None;
            }
            if n < best.0 {
                best = (n, item);
            }
            Some(n == 1)
        };
        'scan: {
            for t in 0..k {
                for r in bits(self.row_free[t]) {
                    if consider(Item::Row(t, r))? {
                        break 'scan;
                    }
                }
                for c in bits(self.col_free[t]) {
                    if consider(Item::Col(t, c))? {
                        break 'scan;
                    }
                }
                for s in bits(self.sym_free[t]) {
                    if consider(Item::Sym(t, s))? {
                        break 'scan;
                    }
                }
            }
        }
        Some(best.1)
    }

    /// Row 0 gets increasing columns to break the symmetry between
    /// transversals, then the exact-cover search runs.
    pub(crate) fn run(mut self) -> Outcome {
        let mut cols = Vec::with_capacity(self.k);
        match self.row_zero(&mut cols, 0) {
            Some(true) => Outcome::Found(
                (0..self.k).map(|t| self.assign[t * self.q..(t + 1) * self.q].to_vec()).collect(),
            ),
            Some(false) => Outcome::Absent,
            None => Outcome::Aborted,
        }
    }

    fn row_zero(&mut self, cols: &mut Vec<usize>, min_col: usize) -> Option<bool> {
        let t = cols.len();
        if t == self.k {
            return self.solve();
        }
        for c in min_col..self.q {
            if self.q - c < self.k - t {
                break;
            }
            if !self.open(t, 0, c) {
                continue;
            }
            self.toggle(t, 0, c, true);
            cols.push(c);
            if self.row_zero(cols, c + 1)? {
                return Some(true);
            }
            cols.pop();
            self.toggle(t, 0, c, false);
        }
        Some(false)
    }

    /// `None` when the node limit is hit.
    fn solve(&mut self) -> Option<bool> {
        if self.remaining == 0 {
            return Some(true);
        }
        let Some(item) = self.choose() else {
            return Some(false);
        };
        let mut options = self.options(item);
        if let Some(rng) = self.rng.as_mut() {
            options.shuffle(rng);
        }
        for (t, r, c) in options {
            self.nodes += 1;
            if self.nodes > self.node_limit {
                return None;
            }
            self.toggle(t, r, c, true);
            if self.solve()? {
                return Some(true);
            }
            self.toggle(t, r, c, false);
        }
        Some(false)
    }
}
