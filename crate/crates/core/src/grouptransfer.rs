//! Finite groups as multiplication tables, their abelianizations, and the
//! transfer `G_ab → H_ab` for a subgroup of index 2.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::abelian::{group_from_relations, AbelianError, FgAbelianGroup, GroupHom};

/// Tables larger than this are refused; axioms are checked in `O(n³)`.
pub const MAX_TABLE_ORDER: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("table must be a nonempty square of size at most {MAX_TABLE_ORDER}, got {0} rows")]
    Size(usize),
    #[error("row {0} has the wrong length or an entry out of range")]
    BadRow(usize),
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("k^2 = {k}^2 is not 1 mod {n}; the presentation is inconsistent")]
    InconsistentPresentation { n: i64, k: i64 },
    #[error("character is not a surjective homomorphism to Z/2: {0}")]
    BadCharacter(String),
    #[error("cannot parse word {0:?}")]
    BadWord(String),
    #[error("transfer depends on the coset representative")]
    RepresentativeDependence,
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroupTable {
    /// Checks closure, identity, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 || n > MAX_TABLE_ORDER {
            return Err(GroupError::Size(n));
        }
        if let Some(i) = table.iter().position(|r| r.len() != n || r.iter().any(|&e| e >= n)) {
            return Err(GroupError::BadRow(i));
        }
        if labels.as_ref().is_some_and(|l| l.len() != n) {
            return Err(GroupError::Size(n));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(GroupError::NoIdentity)?;
        let inverses = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| table[g][h] == identity && table[h][g] == identity)
                    .ok_or(GroupError::NoInverse(g))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroupTable {
            table,
            identity,
            inverses,
            labels,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, g: usize, k: i64) -> usize {
        let base = if k < 0 { self.inverse(g) } else { g };
        (0..k.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inverse(a), self.inverse(b)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => format!("g{g}"),
        }
    }

    /// Sorted element orders, e.g. `[1, 2, 2, 2, 2, 2, 4, 4]` for `D₄`.
    pub fn order_census(&self) -> Vec<usize> {
        let mut c: Vec<usize> = (0..self.order()).map(|g| self.element_order(g)).collect();
        c.sort_unstable();
        c
    }

    /// The subgroup on `elements` (closed under multiplication), reindexed
    /// in the given order.
    pub fn subgroup(&self, elements: &[usize]) -> Result<FiniteGroupTable, GroupError> {
        let mut index = vec![usize::MAX; self.order()];
        for (i, &g) in elements.iter().enumerate() {
            index[g] = i;
        }
        let table = elements
            .iter()
            .map(|&a| elements.iter().map(|&b| index[self.mul(a, b)]).collect())
            .collect::<Vec<Vec<usize>>>();
        let labels = elements.iter().map(|&g| self.label(g)).collect();
        FiniteGroupTable::new(table, Some(labels))
    }
}

/// `C_n ⋊ C₂ = ⟨a, b | aⁿ, b², b a b⁻¹ = aᵏ⟩`; element `i + n·j` is `aⁱbʲ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semidirect {
    pub n: i64,
    pub k: i64,
    pub table: FiniteGroupTable,
}

pub fn build_semidirect(n: i64, k: i64) -> Result<Semidirect, GroupError> {
    if n < 1 || 2 * n as usize > MAX_TABLE_ORDER {
        return Err(GroupError::Size(2 * n.max(0) as usize));
    }
    let k = k.rem_euclid(n);
    if (k * k) % n != 1 % n {
        return Err(GroupError::InconsistentPresentation { n, k });
    }
    let size = 2 * n as usize;
    let twist = |j: i64, l: i64| if j == 0 { l } else { l * k };
    let table = (0..size)
        .map(|x| {
            let (i, j) = ((x as i64) % n, (x as i64) / n);
            (0..size)
                .map(|y| {
                    let (l, m) = ((y as i64) % n, (y as i64) / n);
                    let a = (i + twist(j, l)).rem_euclid(n);
                    let b = (j + m) % 2;
                    (a + n * b) as usize
                })
                .collect()
        })
        .collect();
    let labels = (0..size).map(|x| format_word(x as i64 % n, x as i64 / n)).collect();
    Ok(Semidirect {
        n,
        k,
        table: FiniteGroupTable::new(table, Some(labels))?,
    })
}

fn format_word(i: i64, j: i64) -> String {
    let a = match i {
        0 => String::new(),
        1 => "a".to_string(),
        _ => format!("a^{i}"),
    };
    match (a.is_empty(), j) {
        (true, 0) => "1".to_string(),
        (true, _) => "b".to_string(),
        (false, 0) => a,
        (false, _) => format!("{a}b"),
    }
}

impl Semidirect {
    pub fn element(&self, i: i64, j: i64) -> usize {
        (i.rem_euclid(self.n) + self.n * j.rem_euclid(2)) as usize
    }

    pub fn a(&self) -> usize {
        self.element(1, 0)
    }

    pub fn b(&self) -> usize {
        self.element(0, 1)
    }

    /// Parses words such as `a^4`, `ab`, `a^-1 b a`, `1`.
    pub fn parse_word(&self, word: &str) -> Result<usize, GroupError> {
        let bad = || GroupError::BadWord(word.to_string());
        let w: String = word.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if w.is_empty() || w == "1" || w == "e" {
            return Ok(self.table.identity());
        }
        let mut g = self.table.identity();
        let chars: Vec<char> = w.chars().collect();
        let mut pos = 0;
        while pos < chars.len() {
            let letter = match chars[pos] {
                'a' => self.a(),
                'b' => self.b(),
                _ => return Err(bad()),
            };
            pos += 1;
            let mut exp = 1i64;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let start = pos;
                if pos < chars.len() && chars[pos] == '-' {
                    pos += 1;
                }
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                exp = chars[start..pos].iter().collect::<String>().parse().map_err(|_| bad())?;
            }
            g = self.table.mul(g, self.table.pow(letter, exp));
        }
        Ok(g)
    }

    pub fn format(&self, g: usize) -> String {
        self.table.label(g)
    }
}

/// `G/[G,G]` in invariant-factor form with the image of every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abelianization {
    pub group: FgAbelianGroup,
    images: Vec<Vec<i64>>,
    commutator_subgroup: Vec<usize>,
}

impl Abelianization {
    pub fn project(&self, g: usize) -> &[i64] {
        &self.images[g]
    }

    pub fn commutator_subgroup(&self) -> &[usize] {
        &self.commutator_subgroup
    }

    /// Least-index element mapping to `class`, if any.
    pub fn representative(&self, class: &[i64]) -> Option<usize> {
        let class = self.group.normalize(class);
        self.images.iter().position(|img| *img == class)
    }
}

fn closure(g: &FiniteGroupTable, seeds: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([g.identity()]);
    let seeds: Vec<usize> = seeds.into_iter().collect();
    let mut queue: VecDeque<usize> = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in &seeds {
            let y = g.mul(x, s);
            if set.insert(y) {
                queue.push_back(y);
            }
        }
    }
    set.into_iter().collect()
}

/// Computes `[G, G]` as the closure of all commutators, then presents the
/// quotient by a greedy generating set and the relations read off a
/// breadth-first spanning tree of its Cayley graph.
pub fn abelianization(g: &FiniteGroupTable) -> Result<Abelianization, GroupError> {
    let n = g.order();
    let commutators: BTreeSet<usize> =
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| g.commutator(a, b)).collect();
    let derived = closure(g, commutators);

    // coset id of each element
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset[x] == usize::MAX {
            let id = reps.len();
            reps.push(x);
            for &c in &derived {
                coset[g.mul(x, c)] = id;
            }
        }
    }
    let q = reps.len();
    let qmul = |a: usize, b: usize| coset[g.mul(reps[a], reps[b])];
    let qid = coset[g.identity()];

    // greedy generators of the quotient
    let mut gens: Vec<usize> = Vec::new();
    let mut span: BTreeSet<usize> = BTreeSet::from([qid]);
    for c in 0..q {
        if span.len() == q {
            break;
        }
        if !span.contains(&c) {
            gens.push(c);
            let mut frontier: Vec<usize> = span.iter().copied().collect();
            while let Some(x) = frontier.pop() {
                for &s in &gens {
                    let y = qmul(x, s);
                    if span.insert(y) {
                        frontier.push(y);
                    }
                }
            }
        }
    }

    // coordinates along a BFS tree, relations from every edge
    let r = gens.len();
    let mut coords: Vec<Option<Vec<i64>>> = vec![None; q];
    coords[qid] = Some(vec![0; r]);
    let mut queue = VecDeque::from([qid]);
    let mut relations = Vec::new();
    while let Some(x) = queue.pop_front() {
        let cx = coords[x].clone().expect("visited");
        for (i, &s) in gens.iter().enumerate() {
            let y = qmul(x, s);
            let mut step = cx.clone();
            step[i] += 1;
            match &coords[y] {
                None => {
                    coords[y] = Some(step);
                    queue.push_back(y);
                }
                Some(cy) => {
                    let rel: Vec<i64> = step.iter().zip(cy).map(|(a, b)| a - b).collect();
                    if rel.iter().any(|&v| v != 0) {
                        relations.push(rel);
                    }
                }
            }
        }
    }
    let (group, proj) = group_from_relations(&relations, r)?;
    let images = (0..n)
        .map(|x| proj.apply(coords[coset[x]].as_ref().expect("quotient is generated")))
        .collect();
    Ok(Abelianization {
        group,
        images,
        commutator_subgroup: derived,
    })
}

/// `G` with a surjective character `χ : G → Z/2`; `H = ker χ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexTwoData {
    group: FiniteGroupTable,
    character: Vec<bool>,
    subgroup: Vec<usize>,
}

impl IndexTwoData {
    /// `character[g]` is `χ(g)`.
    pub fn new(group: FiniteGroupTable, character: Vec<bool>) -> Result<Self, GroupError> {
        let n = group.order();
        if character.len() != n {
            return Err(GroupError::BadCharacter(format!("{} values for {n} elements", character.len())));
        }
        for a in 0..n {
            for b in 0..n {
                if character[group.mul(a, b)] != (character[a] ^ character[b]) {
                    return Err(GroupError::BadCharacter(format!(
                        "chi({}) != chi({}) + chi({})",
                        group.label(group.mul(a, b)),
                        group.label(a),
                        group.label(b)
                    )));
                }
            }
        }
        if !character.iter().any(|&c| c) {
            return Err(GroupError::BadCharacter("not surjective".into()));
        }
        let subgroup = (0..n).filter(|&g| !character[g]).collect();
        Ok(IndexTwoData {
            group,
            character,
            subgroup,
        })
    }

    /// Extends values on generators; fails if they do not define a
    /// homomorphism on the subgroup they generate, or do not generate `G`.
    pub fn from_generators(group: FiniteGroupTable, generators: &[(usize, bool)]) -> Result<Self, GroupError> {
        let n = group.order();
        let mut chi: Vec<Option<bool>> = vec![None; n];
        chi[group.identity()] = Some(false);
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            let cx = chi[x].expect("visited");
            for &(s, v) in generators {
                let y = group.mul(x, s);
                match chi[y] {
                    None => {
                        chi[y] = Some(cx ^ v);
                        queue.push_back(y);
                    }
                    Some(cy) if cy != cx ^ v => {
                        return Err(GroupError::BadCharacter(format!(
                            "inconsistent value at {}",
                            group.label(y)
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        let character = chi
            .into_iter()
            .collect::<Option<Vec<bool>>>()
            .ok_or_else(|| GroupError::BadCharacter("generators do not generate the group".into()))?;
        IndexTwoData::new(group, character)
    }

    pub fn group(&self) -> &FiniteGroupTable {
        &self.group
    }

    pub fn character(&self, g: usize) -> bool {
        self.character[g]
    }

    /// Elements of `H` in increasing order; `H`'s table uses this order.
    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn coset_representatives(&self) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.character[g]).collect()
    }
}

/// The transfer together with the data needed to read its values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub hom: GroupHom,
    pub g_ab: Abelianization,
    pub h_ab: Abelianization,
    subgroup: Vec<usize>,
}

impl Transfer {
    /// `τ(g)` as a class of `H_ab`.
    pub fn apply(&self, g: usize) -> Vec<i64> {
        self.hom.apply(self.g_ab.project(g))
    }

    /// The least-index element of `G` lying in `H` that represents `τ(g)`.
    pub fn apply_representative(&self, g: usize) -> usize {
        let h = self.h_ab.representative(&self.apply(g)).expect("projection is onto");
        self.subgroup[h]
    }
}

impl fmt::Display for Transfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.hom.domain(), self.hom.codomain())
    }
}

/// `τ : G_ab → H_ab`, `g ↦ g·(r g r⁻¹)` for `g ∈ H` and `g ↦ g²` otherwise.
///
/// Computed for every `r ∉ H`; each must give the same homomorphism, and
/// the homomorphism must reproduce the elementwise formula on all of `G`.
pub fn transfer_index2(data: &IndexTwoData) -> Result<Transfer, GroupError> {
    let g = &data.group;
    let n = g.order();
    let h_table = g.subgroup(&data.subgroup)?;
    let mut h_index = vec![usize::MAX; n];
    for (i, &x) in data.subgroup.iter().enumerate() {
        h_index[x] = i;
    }
    let g_ab = abelianization(g)?;
    let h_ab = abelianization(&h_table)?;

    let mut result: Option<GroupHom> = None;
    for r in data.coset_representatives() {
        let value = |x: usize| -> usize {
            if data.character[x] {
                g.mul(x, x)
            } else {
                g.mul(x, g.mul(g.mul(r, x), g.inverse(r)))
            }
        };
        let matrix_cols: Vec<Vec<i64>> = (0..g_ab.group.ngens())
            .map(|i| {
                let target = g_ab.group.generator(i);
                let x = g_ab.representative(&target).expect("projection is onto");
                h_ab.project(h_index[value(x)]).to_vec()
            })
            .collect();
        let rows = h_ab.group.ngens();
        let matrix = (0..rows)
            .map(|i| matrix_cols.iter().map(|c| c[i]).collect())
            .collect();
        let hom = GroupHom::new(g_ab.group.clone(), h_ab.group.clone(), matrix)?;
        for x in 0..n {
            if hom.apply(g_ab.project(x)) != h_ab.project(h_index[value(x)]) {
                return Err(GroupError::Abelian(AbelianError::NotAHomomorphism { column: x }));
            }
        }
        match &result {
            None => result = Some(hom),
            Some(prev) if *prev != hom => return Err(GroupError::RepresentativeDependence),
            Some(_) => {}
        }
    }
    Ok(Transfer {
        hom: result.expect("index-2 subgroup has a nontrivial coset"),
        g_ab,
        h_ab,
        subgroup: data.subgroup.clone(),
    })
}

/// The semidirect product with `χ(a) = 0`, `χ(b) = 1`.
pub fn semidirect_index_two(s: &Semidirect) -> Result<IndexTwoData, GroupError> {
    IndexTwoData::from_generators(s.table.clone(), &[(s.a(), false), (s.b(), true)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_table(n: usize) -> FiniteGroupTable {
        FiniteGroupTable::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(), None).unwrap()
    }

    fn product_table(m: usize, n: usize) -> FiniteGroupTable {
        let size = m * n;
        let table = (0..size)
            .map(|x| {
                (0..size)
                    .map(|y| ((x % m + y % m) % m) + m * ((x / m + y / m) % n))
                    .collect()
            })
            .collect();
        FiniteGroupTable::new(table, None).unwrap()
    }

    #[test]
    fn rejects_non_groups() {
        assert_eq!(FiniteGroupTable::new(vec![], None), Err(GroupError::Size(0)));
        assert_eq!(FiniteGroupTable::new(vec![vec![0, 0], vec![0, 0]], None), Err(GroupError::NoIdentity));
        assert_eq!(
            FiniteGroupTable::new(vec![vec![0, 1], vec![1, 1]], None),
            Err(GroupError::NoInverse(1))
        );
        // x*y = x - y mod 3 has no identity; subtraction table with identity row
        let t = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(FiniteGroupTable::new(t, None).is_err());
    }

    #[test]
    fn semidirect_shapes() {
        let g = build_semidirect(8, 5).unwrap();
        assert_eq!(g.table.order(), 16);
        assert_eq!(g.table.element_order(g.a()), 8);
        let b = g.b();
        assert_eq!(g.table.mul(g.table.mul(b, g.a()), g.table.inverse(b)), g.element(5, 0));

        let c6 = build_semidirect(3, 1).unwrap();
        assert!(c6.table.is_abelian());
        assert!(c6.table.order_census().contains(&6));

        let d4 = build_semidirect(4, 3).unwrap();
        assert_eq!(d4.table.order_census(), vec![1, 2, 2, 2, 2, 2, 4, 4]);

        assert_eq!(
            build_semidirect(8, 3).map(|_| ()),
            Ok(()),
            "3^2 = 9 = 1 mod 8"
        );
        assert_eq!(
            build_semidirect(8, 2).unwrap_err(),
            GroupError::InconsistentPresentation { n: 8, k: 2 }
        );
    }

    #[test]
    fn words() {
        let g = build_semidirect(8, 5).unwrap();
        assert_eq!(g.parse_word("a^4").unwrap(), g.element(4, 0));
        assert_eq!(g.parse_word("a^-1").unwrap(), g.element(7, 0));
        assert_eq!(g.parse_word("ba").unwrap(), g.element(5, 1));
        assert_eq!(g.parse_word("1").unwrap(), 0);
        assert!(g.parse_word("c").is_err());
        assert_eq!(g.format(g.element(4, 0)), "a^4");
        assert_eq!(g.format(g.element(1, 1)), "ab");
        assert_eq!(g.format(g.element(0, 0)), "1");
    }

    #[test]
    fn abelianizations() {
        let g = build_semidirect(8, 5).unwrap();
        let ab = abelianization(&g.table).unwrap();
        assert_eq!(ab.group, FgAbelianGroup::new(vec![2, 4], 0).unwrap());
        assert_eq!(ab.commutator_subgroup(), &[0, 4]);
        let a = ab.project(g.a());
        assert_eq!(ab.group.element_order(a).unwrap().finite(), Some(4));

        let d4 = build_semidirect(4, 3).unwrap();
        assert_eq!(abelianization(&d4.table).unwrap().group, FgAbelianGroup::new(vec![2, 2], 0).unwrap());

        let c12 = cyclic_table(12);
        assert_eq!(abelianization(&c12).unwrap().group, FgAbelianGroup::cyclic(12));
        let c2c4 = product_table(2, 4);
        assert_eq!(abelianization(&c2c4).unwrap().group, FgAbelianGroup::new(vec![2, 4], 0).unwrap());
        assert!(abelianization(&cyclic_table(1)).unwrap().group.is_trivial());
    }

    #[test]
    fn transfer_on_semidirect() {
        let g = build_semidirect(8, 5).unwrap();
        let data = semidirect_index_two(&g).unwrap();
        let t = transfer_index2(&data).unwrap();
        let a2 = g.parse_word("a^2").unwrap();
        assert_eq!(g.format(t.apply_representative(a2)), "a^4");
        assert!(!t.h_ab.group.is_zero(&t.apply(a2)));
        assert_eq!(t.h_ab.group.element_order(&t.apply(a2)).unwrap().finite(), Some(2));
        assert_eq!(g.format(t.apply_representative(g.a())), "a^6");
        // g ∉ H goes to g²
        assert_eq!(t.apply_representative(g.b()), g.table.identity());
    }

    #[test]
    fn transfer_abelian_is_doubling_on_h() {
        let g = product_table(2, 2);
        // H = first factor {0, 1}; χ = second coordinate
        let chi = (0..4).map(|x| x / 2 == 1).collect();
        let data = IndexTwoData::new(g, chi).unwrap();
        let t = transfer_index2(&data).unwrap();
        assert!(t.hom.is_zero());

        let c4 = cyclic_table(4);
        let data = IndexTwoData::new(c4, (0..4).map(|x| x % 2 == 1).collect()).unwrap();
        let t = transfer_index2(&data).unwrap();
        // H = {0, 2}; τ(2) = 4 = 0, τ(1) = 1 + 1 = 2 ≠ 0
        assert!(t.h_ab.group.is_zero(&t.apply(2)));
        assert_eq!(t.apply_representative(1), 2);
    }

    #[test]
    fn bad_characters() {
        let c4 = cyclic_table(4);
        assert!(IndexTwoData::new(c4.clone(), vec![false, true, true, false]).is_err());
        assert!(IndexTwoData::new(c4.clone(), vec![false; 4]).is_err());
        assert!(IndexTwoData::from_generators(c4, &[(2, true)]).is_err());
    }
}
