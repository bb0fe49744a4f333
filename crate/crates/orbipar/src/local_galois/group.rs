//! Finite groups given by multiplication tables. Element 0 is the identity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{structural, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    name: String,
}

impl FiniteGroup {
    /// Builds a group from its table, checking closure, identity, inverses
    /// and associativity (exhaustive up to order 24, 4096 random triples above).
    pub fn from_table(table: Vec<Vec<usize>>, name: &str) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0
            || table
                .iter()
                .any(|row| row.len() != n || row.iter().any(|&x| x >= n))
        {
            return Err(structural(
                "group table must be square with entries in range",
            ));
        }
        for (a, row) in table.iter().enumerate() {
            if table[0][a] != a || row[0] != a {
                return Err(structural("element 0 must be the identity"));
            }
        }
        let flat: Vec<usize> = table.iter().flatten().copied().collect();
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| flat[a * n + b] == 0) {
                Some(b) if flat[b * n + a] == 0 => inverse[a] = b,
                _ => return Err(structural(format!("element {a} has no two-sided inverse"))),
            }
        }
        let mut g = FiniteGroup {
            order: n,
            table: flat,
            inverse,
            generators: Vec::new(),
            name: name.to_string(),
        };
        if let Some((a, b, c)) = g.associativity_violation() {
            return Err(structural(format!(
                "table is not associative at ({a}, {b}, {c})"
            )));
        }
        g.generators = g.greedy_generators();
        Ok(g)
    }

    fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| {
            self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
        };
        if n <= 24 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if check(a, b, c) {
                            return Some((a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6a09e667);
            for _ in 0..4096 {
                let (a, b, c) = (
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                );
                if check(a, b, c) {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for g in 1..self.order {
            if span.len() == self.order {
                break;
            }
            if !span.contains(&g) {
                gens.push(g);
                span = self.subgroup_generated(&gens);
            }
        }
        gens
    }

    /// Cyclic group of order `n`; element `a` is the `a`-th power of the generator.
    pub fn cyclic(n: usize) -> FiniteGroup {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        FiniteGroup::from_table(table, &format!("Z/{n}")).expect("cyclic table")
    }

    /// Dihedral group of order `2m`; element `a + m b` is `r^a f^b` with `f r f = r^-1`.
    pub fn dihedral(m: usize) -> FiniteGroup {
        let n = 2 * m;
        let decode = |x: usize| (x % m, x / m);
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let (a1, b1) = decode(x);
                        let (a2, b2) = decode(y);
                        let a = if b1 == 0 {
                            (a1 + a2) % m
                        } else {
                            (a1 + m - a2) % m
                        };
                        a + m * ((b1 + b2) % 2)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(table, &format!("D{m}")).expect("dihedral table")
    }

    /// Direct product; element `a + |G| b` is the pair `(a, b)`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
        let (n1, n2) = (g.order, h.order);
        let table = (0..n1 * n2)
            .map(|x| {
                (0..n1 * n2)
                    .map(|y| g.mul(x % n1, y % n1) + n1 * h.mul(x / n1, y / n1))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(table, &format!("{}x{}", g.name, h.name)).expect("product table")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn elem_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| self.table[a * self.order..(a + 1) * self.order].to_vec())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted list of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// Checks that `map` (indexed by elements of `self`) is a homomorphism into `target`.
    pub fn is_homomorphism(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.order
            && map.iter().all(|&x| x < target.order)
            && (0..self.order)
                .all(|a| (0..self.order).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b])))
    }
}
