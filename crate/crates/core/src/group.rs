//! Finite groups given by multiplication tables.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Checks closure, identity, inverses and associativity of `table`,
    /// where `table[i][j]` is the index of `g_i g_j`.
    pub fn from_table(name: &str, labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if labels.len() != n {
            return Err(Error::NotAGroup(format!(
                "{} labels for {} elements",
                labels.len(),
                n
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!("row {i} has length {}", row.len())));
            }
            if let Some(j) = row.iter().position(|&x| x >= n) {
                return Err(Error::NotAGroup(format!("closure fails at ({i},{j})")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if table[table[i][j]][k] != table[i][table[j][k]] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {g} has no inverse")))?;
            inverses.push(inv);
        }
        Ok(FiniteGroup {
            name: name.to_string(),
            labels,
            table,
            identity,
            inverses,
        })
    }

    /// `Z_n` with elements `e, u, u2, ..` (index = exponent).
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAGroup("cyclic group of order 0".into()));
        }
        let labels = (0..n).map(|k| power_label("u", k)).collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_table(&format!("Z{n}"), labels, table)
    }

    /// `Z_{n1} x Z_{n2} x ..`; element `(k1, k2, ..)` has index
    /// `k1 + n1*(k2 + n2*(..))` and label built from generators `a, b, ..`.
    pub fn abelian(orders: &[usize]) -> Result<Self> {
        if orders.is_empty() || orders.contains(&0) || orders.len() > 26 {
            return Err(Error::NotAGroup(format!("bad factor orders {orders:?}")));
        }
        let n: usize = orders.iter().product();
        let digits = |mut x: usize| {
            orders
                .iter()
                .map(|&m| {
                    let d = x % m;
                    x /= m;
                    d
                })
                .collect::<Vec<_>>()
        };
        let index = |ds: &[usize]| ds.iter().zip(orders).rev().fold(0, |acc, (&d, &m)| acc * m + d);
        let labels = (0..n)
            .map(|x| {
                let ds = digits(x);
                let s: String = ds
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d > 0)
                    .map(|(f, &d)| {
                        let g = ((b'a' + f as u8) as char).to_string();
                        if d == 1 {
                            g
                        } else {
                            format!("{g}{d}")
                        }
                    })
                    .collect();
                if s.is_empty() {
                    "e".to_string()
                } else {
                    s
                }
            })
            .collect();
        let table = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let s: Vec<usize> = digits(x)
                            .iter()
                            .zip(digits(y))
                            .zip(orders)
                            .map(|((a, b), m)| (a + b) % m)
                            .collect();
                        index(&s)
                    })
                    .collect()
            })
            .collect();
        let name = orders
            .iter()
            .map(|m| format!("Z{m}"))
            .collect::<Vec<_>>()
            .join("x");
        Self::from_table(&name, labels, table)
    }

    /// The symmetric group on `{0,1,2}`, elements
    /// `e, (01), (12), (02), (012), (021)`, composed right to left.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let labels = ["e", "(01)", "(12)", "(02)", "(012)", "(021)"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let st = [s[t[0]], s[t[1]], s[t[2]]];
                        perms.iter().position(|p| *p == st).expect("closed")
                    })
                    .collect()
            })
            .collect();
        Self::from_table("S3", labels, table).expect("S3 is a group")
    }

    /// Built-in groups: `Zn`, products such as `Z2xZ2`, and `S3`.
    pub fn named(name: &str) -> Result<Self> {
        if name == "S3" {
            return Ok(Self::symmetric3());
        }
        let parse = |s: &str| -> Option<usize> { s.strip_prefix('Z')?.parse().ok().filter(|&m| m > 0) };
        let orders: Option<Vec<usize>> = name.split('x').map(parse).collect();
        match orders {
            Some(o) if o.len() == 1 => Self::cyclic(o[0]),
            Some(o) => Self::abelian(&o),
            None => Err(Error::NotAGroup(format!("unknown group {name:?}"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// `g^-1 t g`.
    pub fn conj(&self, t: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), t), g)
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }
}

fn power_label(g: &str, k: usize) -> String {
    match k {
        0 => "e".to_string(),
        1 => g.to_string(),
        _ => format!("{g}{k}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_groups() {
        let z4 = FiniteGroup::named("Z4").unwrap();
        assert_eq!(z4.labels(), ["e", "u", "u2", "u3"]);
        assert_eq!(z4.inv(1), 3);
        let k = FiniteGroup::named("Z2xZ2").unwrap();
        assert_eq!(k.labels(), ["e", "a", "b", "ab"]);
        assert_eq!(k.mul(1, 2), 3);
        let s3 = FiniteGroup::named("S3").unwrap();
        assert!(!s3.is_abelian());
        assert_eq!(s3.order(), 6);
        // (01)(12) = (012) composing right to left: 0->0->1, 1->2->2, 2->1->0
        assert_eq!(s3.labels()[s3.mul(1, 2)], "(012)");
        assert!(FiniteGroup::named("Q8").is_err());
    }

    #[test]
    fn rejects_non_groups() {
        let labels = vec!["e".to_string(), "u".to_string()];
        let bad = FiniteGroup::from_table("bad", labels.clone(), vec![vec![0, 1], vec![1, 1]]);
        assert!(matches!(bad, Err(Error::NotAGroup(_))));
        let open = FiniteGroup::from_table("open", labels, vec![vec![0, 2], vec![1, 0]]);
        assert!(open.unwrap_err().to_string().contains("closure"));
    }

    #[test]
    fn tampered_z4_names_the_triple() {
        let mut t = FiniteGroup::cyclic(4).unwrap().table().to_vec();
        t[1][1] = 1;
        let labels = FiniteGroup::cyclic(4).unwrap().labels().to_vec();
        let err = FiniteGroup::from_table("Z4", labels, t).unwrap_err();
        assert!(err.to_string().contains("associativity fails at ("), "{err}");
    }
}
