use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Groups larger than this are rejected; every subgroup and conjugacy
/// computation is exhaustive.
pub const MAX_ORDER: usize = 48;

/// A subgroup, as the sorted list of its member indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.members.len().cmp(&other.members.len()).then_with(|| self.members.cmp(&other.members))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

/// A finite group given by its full multiplication table. Element 0 is the
/// identity.
#[derive(Clone)]
pub struct Group {
    name: String,
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    generators: Vec<usize>,
    permutations: Option<Vec<Vec<usize>>>,
    subgroups: Vec<Subgroup>,
    class_of: Vec<usize>,
    class_reps: Vec<usize>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.mul == other.mul
    }
}

impl Eq for Group {}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {})", self.name, self.order)
    }
}

impl Group {
    /// Validates the group axioms on the whole table (`table[a][b] = a·b`).
    pub fn from_table(name: &str, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidGroup(format!("order {n} outside 1..={MAX_ORDER}")));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidGroup("table is not square over the carrier".into()));
        }
        if (0..n).any(|a| table[0][a] != a || table[a][0] != a) {
            return Err(Error::InvalidGroup("element 0 is not the identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inv[a] = b,
                None => return Err(Error::InvalidGroup(format!("element {a} has no inverse"))),
            }
        }
        let mul = table.into_iter().flatten().collect();
        Ok(Self::finish(name, n, mul, inv, (1..n).collect(), None))
    }

    /// The permutation group generated by `generators` acting on `0..degree`.
    /// Elements are listed in breadth-first order from the identity.
    pub fn from_permutations(name: &str, degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for gen in generators {
            let mut seen = vec![false; degree];
            if gen.len() != degree || gen.iter().any(|&v| v >= degree || std::mem::replace(&mut seen[v], true)) {
                return Err(Error::InvalidGroup(format!("{gen:?} is not a permutation of {degree} points")));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for gen in generators {
                let next = compose_perm(gen, &elements[e]);
                if !index.contains_key(&next) {
                    if elements.len() == MAX_ORDER {
                        return Err(Error::InvalidGroup(format!("generated group exceeds order {MAX_ORDER}")));
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let n = elements.len();
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = index[&compose_perm(&elements[a], &elements[b])];
            }
        }
        let inv = (0..n)
            .map(|a| {
                let mut p = vec![0; degree];
                for (i, &v) in elements[a].iter().enumerate() {
                    p[v] = i;
                }
                index[&p]
            })
            .collect();
        let gens = generators.iter().map(|g| index[g]).collect();
        Ok(Self::finish(name, n, mul, inv, gens, Some(elements)))
    }

    fn finish(
        name: &str,
        order: usize,
        mul: Vec<usize>,
        inv: Vec<usize>,
        generators: Vec<usize>,
        permutations: Option<Vec<Vec<usize>>>,
    ) -> Self {
        let mut group = Group {
            name: name.to_string(),
            order,
            mul,
            inv,
            generators,
            permutations,
            subgroups: Vec::new(),
            class_of: Vec::new(),
            class_reps: Vec::new(),
        };
        group.subgroups = group.enumerate_subgroups();
        let mut class_of = vec![usize::MAX; group.subgroups.len()];
        let mut class_reps = Vec::new();
        for i in 0..group.subgroups.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let class = class_reps.len();
            class_reps.push(i);
            for g in 0..order {
                let c = group.conjugate(&group.subgroups[i], g);
                let j = group.subgroups.binary_search(&c).expect("conjugate is a subgroup");
                class_of[j] = class;
            }
        }
        group.class_of = class_of;
        group.class_reps = class_reps;
        group
    }

    fn enumerate_subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Subgroup> = (0..self.order).map(|g| self.generate(&[g])).collect();
        let mut frontier: Vec<Subgroup> = found.iter().cloned().collect();
        while let Some(s) = frontier.pop() {
            for g in 0..self.order {
                if s.contains(g) {
                    continue;
                }
                let mut gens = s.members.clone();
                gens.push(g);
                let t = self.generate(&gens);
                if found.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        found.into_iter().collect()
    }

    pub fn trivial() -> Self {
        Self::from_permutations("e", 1, &[]).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Self {
        let gen: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let gens = if n > 1 { vec![gen] } else { vec![] };
        Self::from_permutations(&format!("C{n}"), n, &gens).expect("cyclic group")
    }

    pub fn klein_four() -> Self {
        Self::from_permutations("C2xC2", 4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]]).expect("Klein four-group")
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n > 1 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            gens.push(swap);
        }
        if n > 2 {
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        Self::from_permutations(&format!("S{n}"), n, &gens).expect("symmetric group")
    }

    /// The dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> Self {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(&format!("D{}", 2 * n), n, &[rot, refl]).expect("dihedral group")
    }

    /// Looks up one of the built-in groups by name.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "e" | "C1" | "trivial" => Some(Self::trivial()),
            "C2xC2" | "V4" | "K4" => Some(Self::klein_four()),
            "S3" => Some(Self::symmetric(3)),
            "S4" => Some(Self::symmetric(4)),
            _ => {
                if let Some(n) = name.strip_prefix('C').and_then(|s| s.parse::<usize>().ok()) {
                    (1..=MAX_ORDER).contains(&n).then(|| Self::cyclic(n))
                } else if let Some(n) = name.strip_prefix('D').and_then(|s| s.parse::<usize>().ok()) {
                    (n >= 6 && n % 2 == 0 && n <= MAX_ORDER).then(|| Self::dihedral(n / 2))
                } else {
                    None
                }
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Elements as permutations, when the group was built from generators.
    pub fn permutations(&self) -> Option<&[Vec<usize>]> {
        self.permutations.as_deref()
    }

    /// Index of the element acting as `perm`, when built from permutations.
    pub fn element_of_permutation(&self, perm: &[usize]) -> Option<usize> {
        self.permutations.as_ref()?.iter().position(|p| p == perm)
    }

    /// The subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut members = BTreeSet::from([0]);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let b = self.mul(g, a);
                if members.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        Subgroup { members: members.into_iter().collect() }
    }

    /// Validates that `members` is a subgroup.
    pub fn subgroup(&self, members: &[usize]) -> Result<Subgroup> {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        if set.iter().any(|&g| g >= self.order) || !set.contains(&0) {
            return Err(Error::InvalidGroup("subgroup must contain the identity and valid elements".into()));
        }
        for &a in &set {
            if !set.contains(&self.inv(a)) || set.iter().any(|&b| !set.contains(&self.mul(a, b))) {
                return Err(Error::InvalidGroup(format!("{members:?} is not closed")));
            }
        }
        Ok(Subgroup { members: set.into_iter().collect() })
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { members: (0..self.order).collect() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![0] }
    }

    /// All subgroups, ordered by (order, members).
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    /// `g S g⁻¹`.
    pub fn conjugate(&self, s: &Subgroup, g: usize) -> Subgroup {
        let gi = self.inv(g);
        let mut members: Vec<usize> = s.members.iter().map(|&h| self.mul(self.mul(g, h), gi)).collect();
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup { members: a.members.iter().copied().filter(|&g| b.contains(g)).collect() }
    }

    /// Some `g` with `g a g⁻¹ = b`.
    pub fn conjugator(&self, a: &Subgroup, b: &Subgroup) -> Option<usize> {
        (0..self.order).find(|&g| self.conjugate(a, g) == *b)
    }

    /// Some `g ∈ within` with `g a g⁻¹ = b`.
    pub fn conjugator_within(&self, within: &Subgroup, a: &Subgroup, b: &Subgroup) -> Option<usize> {
        within.members.iter().copied().find(|&g| self.conjugate(a, g) == *b)
    }

    /// Index of the conjugacy class of `s` among [`Group::class_representatives`].
    pub fn class_index(&self, s: &Subgroup) -> usize {
        let i = self.subgroups.binary_search(s).expect("not a subgroup of this group");
        self.class_of[i]
    }

    /// The least subgroup (in subgroup order) of each conjugacy class, by
    /// increasing order.
    pub fn class_representatives(&self) -> Vec<&Subgroup> {
        self.class_reps.iter().map(|&i| &self.subgroups[i]).collect()
    }

    /// The least subgroup conjugate to `s` by an element of `within`.
    pub fn canonical_within(&self, within: &Subgroup, s: &Subgroup) -> Subgroup {
        within.members.iter().map(|&g| self.conjugate(s, g)).min().expect("nonempty")
    }

    fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(g, x);
            k += 1;
        }
        k
    }

    fn structural_name(&self, s: &Subgroup) -> String {
        let n = s.order();
        if n == self.order {
            return self.name.clone();
        }
        if n == 1 {
            return "e".into();
        }
        if s.members.iter().any(|&g| self.element_order(g) == n) {
            return format!("C{n}");
        }
        let abelian = s.members.iter().all(|&a| s.members.iter().all(|&b| self.mul(a, b) == self.mul(b, a)));
        match (n, abelian) {
            (4, true) => "C2xC2".into(),
            (6, false) => "S3".into(),
            (8, true) if s.members.iter().all(|&g| self.element_order(g) <= 2) => "C2xC2xC2".into(),
            (8, true) => "C2xC4".into(),
            (8, false) if s.members.iter().filter(|&&g| self.element_order(g) == 2).count() == 1 => "Q8".into(),
            (8, false) => "D8".into(),
            (12, false) if s.members.iter().filter(|&&g| self.element_order(g) == 2).count() == 3 => "A4".into(),
            _ => format!("H{n}"),
        }
    }

    /// A readable name for the conjugacy class of `s`; classes sharing a
    /// structural name get a numeric suffix.
    pub fn subgroup_name(&self, s: &Subgroup) -> String {
        let base = self.structural_name(s);
        let class = self.class_index(s);
        let clashing: Vec<usize> = self
            .class_reps
            .iter()
            .enumerate()
            .filter(|(_, &i)| self.structural_name(&self.subgroups[i]) == base)
            .map(|(c, _)| c)
            .collect();
        if clashing.len() <= 1 {
            base
        } else {
            let k = clashing.iter().position(|&c| c == class).expect("own class") + 1;
            format!("{base}_{k}")
        }
    }
}

fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_subgroup_counts() {
        let cases = [
            (Group::trivial(), 1, 1),
            (Group::cyclic(2), 2, 2),
            (Group::cyclic(4), 4, 3),
            (Group::klein_four(), 4, 5),
            (Group::symmetric(3), 6, 6),
            (Group::symmetric(4), 24, 30),
            (Group::dihedral(4), 8, 10),
        ];
        for (g, order, subgroups) in cases {
            assert_eq!(g.order(), order, "{}", g.name());
            assert_eq!(g.subgroups().len(), subgroups, "{}", g.name());
            for s in g.subgroups() {
                assert_eq!(order % s.order(), 0);
            }
        }
    }

    #[test]
    fn conjugacy_classes() {
        assert_eq!(Group::symmetric(3).class_representatives().len(), 4);
        assert_eq!(Group::klein_four().class_representatives().len(), 5);
        assert_eq!(Group::symmetric(4).class_representatives().len(), 11);
    }

    #[test]
    fn names() {
        let s3 = Group::symmetric(3);
        let names: Vec<String> = s3.class_representatives().iter().map(|s| s3.subgroup_name(s)).collect();
        assert_eq!(names, vec!["e", "C2", "C3", "S3"]);
        let v = Group::klein_four();
        let names: Vec<String> = v.class_representatives().iter().map(|s| v.subgroup_name(s)).collect();
        assert_eq!(names, vec!["e", "C2_1", "C2_2", "C2_3", "C2xC2"]);
    }

    #[test]
    fn table_validation() {
        assert!(Group::from_table("C2", vec![vec![0, 1], vec![1, 0]]).is_ok());
        assert!(Group::from_table("bad", vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(Group::from_table("bad", vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(Group::from_permutations("bad", 2, &[vec![0, 0]]).is_err());
        let g = Group::cyclic(3);
        assert!(g.subgroup(&[0, 1]).is_err());
        assert!(g.subgroup(&[0, 1, 2]).is_ok());
    }

    #[test]
    fn table_and_permutation_constructions_agree() {
        let c3 = Group::cyclic(3);
        let table: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| c3.mul(a, b)).collect()).collect();
        let t = Group::from_table("C3", table).unwrap();
        assert_eq!(t, c3);
        assert_eq!(t.subgroups().len(), 2);
    }
}
