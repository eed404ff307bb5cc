use crate::error::{Error, Result};

/// A finite group given by its multiplication table. `table[g][h]` is the
/// index of g*h. Validated exhaustively on construction (desk scale caps
/// the order at 24).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    label: String,
}

pub const MAX_GROUP_ORDER: usize = 24;

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>, label: impl Into<String>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Invalid("empty group table".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::BudgetExceeded(format!(
                "group order {n} exceeds the validated cap {MAX_GROUP_ORDER}"
            )));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::Invalid("malformed group table".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::Invalid("group table has no identity".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::Invalid(format!("element {g} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Invalid(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { order: n, table, identity, inverse, label: label.into() })
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::from_table(vec![vec![0]], "1").expect("trivial group")
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(table, format!("C{n}")).expect("cyclic group")
    }

    pub fn product(&self, other: &FiniteGroup) -> Result<FiniteGroup> {
        let (n, m) = (self.order, other.order);
        let idx = |a: usize, b: usize| a * m + b;
        let mut table = vec![vec![0; n * m]; n * m];
        for a1 in 0..n {
            for b1 in 0..m {
                for a2 in 0..n {
                    for b2 in 0..m {
                        table[idx(a1, b1)][idx(a2, b2)] =
                            idx(self.table[a1][a2], other.table[b1][b2]);
                    }
                }
            }
        }
        FiniteGroup::from_table(table, format!("{}x{}", self.label, other.label))
    }

    /// The symmetric group on three letters, elements indexed as
    /// permutations in one-line order: e, (12), (13), (23), (123), (132).
    pub fn symmetric_3() -> FiniteGroup {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let compose = |p: &[usize; 3], q: &[usize; 3]| {
            let mut r = [0usize; 3];
            for i in 0..3 {
                r[i] = p[q[i]];
            }
            r
        };
        let table = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        let r = compose(&perms[a], &perms[b]);
                        perms.iter().position(|p| *p == r).unwrap()
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(table, "S3").expect("S3")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn table(&self) -> &Vec<Vec<usize>> {
        &self.table
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[self.identity] = true;
        let mut span_count = 1;
        for g in 0..self.order {
            if span[g] {
                continue;
            }
            gens.push(g);
            // close under multiplication
            loop {
                let mut grew = false;
                for a in 0..self.order {
                    if !span[a] {
                        continue;
                    }
                    for &b in gens.iter() {
                        let ab = self.table[a][b];
                        if !span[ab] {
                            span[ab] = true;
                            span_count += 1;
                            grew = true;
                        }
                        let ba = self.table[b][a];
                        if !span[ba] {
                            span[ba] = true;
                            span_count += 1;
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            if span_count == self.order {
                break;
            }
        }
        gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_validate() {
        let g = FiniteGroup::cyclic(6);
        assert_eq!(g.order(), 6);
        assert_eq!(g.mul(4, 5), 3);
        assert_eq!(g.inv(2), 4);
    }

    #[test]
    fn s3_is_a_group() {
        let g = FiniteGroup::symmetric_3();
        assert_eq!(g.order(), 6);
        // (12)(13) != (13)(12): nonabelian
        assert_ne!(g.mul(1, 2), g.mul(2, 1));
        assert_eq!(g.generators().len(), 2);
    }

    #[test]
    fn bad_table_rejected() {
        // not associative / no identity
        let r = FiniteGroup::from_table(vec![vec![1, 0], vec![0, 0]], "bad");
        assert!(r.is_err());
    }

    #[test]
    fn klein_four() {
        let c2 = FiniteGroup::cyclic(2);
        let v4 = c2.product(&c2).unwrap();
        assert_eq!(v4.order(), 4);
        for g in v4.elements() {
            assert_eq!(v4.mul(g, g), v4.identity());
        }
    }
}
