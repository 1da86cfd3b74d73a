//! Finite groups as multiplication tables, conjugacy structure, and
//! brute-force counting of homomorphisms from finitely presented groups.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Default cap on brute-force homomorphism enumeration (number of
/// candidate generator assignments, i.e. `order^num_generators`).
pub const DEFAULT_HOM_CAP: u64 = 100_000_000;

/// A finite group given by its full multiplication table.
///
/// Every target group here has order <= 120, so the table form keeps
/// `hom_count` a tight inner loop.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub order: usize,
    mul: Vec<usize>, // order*order, row-major
    pub inv: Vec<usize>,
    pub identity: usize,
}

impl FiniteGroup {
    pub fn from_table(name: &str, order: usize, mul: Vec<usize>) -> Result<FiniteGroup> {
        if order == 0 || mul.len() != order * order {
            return Err(Error::Group(format!("{name}: bad table shape")));
        }
        if mul.iter().any(|&x| x >= order) {
            return Err(Error::Group(format!("{name}: table entry out of range")));
        }
        // locate the two-sided identity
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] == x && mul[x * order + e] == x))
            .ok_or_else(|| Error::Group(format!("{name}: no identity element")))?;
        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            inv[x] = (0..order)
                .find(|&y| mul[x * order + y] == identity && mul[y * order + x] == identity)
                .ok_or_else(|| Error::Group(format!("{name}: element {x} has no inverse")))?;
        }
        let g = FiniteGroup { name: name.to_string(), order, mul, inv, identity };
        g.check()?;
        Ok(g)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// g x g^{-1}
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Exhaustive associativity / unit / inverse check.
    pub fn check(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::Group(format!(
                            "{}: associativity fails at ({a},{b},{c})",
                            self.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let mul = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        FiniteGroup::from_table(&format!("Z{n}"), n, mul).expect("cyclic table is a group")
    }

    /// Dihedral group of order 2n: elements r^i s^j, j in {0,1}.
    /// Index = i + n*j; relations r^n = s^2 = e, s r s = r^{-1}.
    pub fn dihedral(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let order = 2 * n;
        let idx = |i: usize, j: usize| i + n * j;
        let mut mul = vec![0; order * order];
        for i1 in 0..n {
            for j1 in 0..2 {
                for i2 in 0..n {
                    for j2 in 0..2 {
                        // (r^i1 s^j1)(r^i2 s^j2) = r^(i1 + i2*(-1)^j1) s^(j1+j2)
                        let i = if j1 == 0 { (i1 + i2) % n } else { (i1 + n - i2 % n) % n };
                        let j = (j1 + j2) % 2;
                        mul[idx(i1, j1) * order + idx(i2, j2)] = idx(i, j);
                    }
                }
            }
        }
        FiniteGroup::from_table(&format!("D{n}"), order, mul).expect("dihedral table is a group")
    }

    /// Symmetric group on n letters (n <= 5), elements in lexicographic
    /// order, composition (p*q)(x) = p(q(x)).
    pub fn symmetric(n: usize) -> FiniteGroup {
        assert!((1..=5).contains(&n), "symmetric groups supported for n <= 5");
        let perms = permutations(n);
        let order = perms.len();
        let rank = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let mut mul = vec![0; order * order];
        for (a, p) in perms.iter().enumerate() {
            for (b, q) in perms.iter().enumerate() {
                let comp: Vec<usize> = (0..n).map(|x| p[q[x]]).collect();
                mul[a * order + b] = rank(&comp);
            }
        }
        FiniteGroup::from_table(&format!("S{n}"), order, mul).expect("symmetric table is a group")
    }

    /// Alternating group A4: even permutations of 4 letters.
    pub fn alternating4() -> FiniteGroup {
        let perms: Vec<Vec<usize>> =
            permutations(4).into_iter().filter(|p| perm_is_even(p)).collect();
        let order = perms.len();
        let rank = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let mut mul = vec![0; order * order];
        for (a, p) in perms.iter().enumerate() {
            for (b, q) in perms.iter().enumerate() {
                let comp: Vec<usize> = (0..4).map(|x| p[q[x]]).collect();
                mul[a * order + b] = rank(&comp);
            }
        }
        FiniteGroup::from_table("A4", order, mul).expect("alternating table is a group")
    }

    /// Quaternion group Q8 = {±1, ±i, ±j, ±k}, index = axis + 4*sign.
    pub fn quaternion8() -> FiniteGroup {
        // axis 0 = 1, 1 = i, 2 = j, 3 = k; sign 0 = +, 1 = -
        let qmul = |a: usize, b: usize| -> (usize, usize) {
            match (a, b) {
                (0, x) => (x, 0),
                (x, 0) => (x, 0),
                (x, y) if x == y => (0, 1), // i*i = j*j = k*k = -1
                (1, 2) => (3, 0),
                (2, 3) => (1, 0),
                (3, 1) => (2, 0),
                (2, 1) => (3, 1),
                (3, 2) => (1, 1),
                (1, 3) => (2, 1),
                _ => unreachable!(),
            }
        };
        let mut mul = vec![0; 64];
        for a in 0..8 {
            for b in 0..8 {
                let (axis, s) = qmul(a % 4, b % 4);
                let sign = (a / 4 + b / 4 + s) % 2;
                mul[a * 8 + b] = axis + 4 * sign;
            }
        }
        FiniteGroup::from_table("Q8", 8, mul).expect("quaternion table is a group")
    }

    /// Look up a group by name: Z<n>, D<n>, S<n<=5>, A4, Q8.
    pub fn by_name(name: &str) -> Result<FiniteGroup> {
        let err = || {
            Error::Group(format!(
                "unknown group {name:?} (expected Z<n>, D<n>, S2..S5, A4, or Q8)"
            ))
        };
        match name {
            "A4" => return Ok(FiniteGroup::alternating4()),
            "Q8" => return Ok(FiniteGroup::quaternion8()),
            _ if name.len() < 2 || !name.is_ascii() => return Err(err()),
            _ => {}
        }
        let (kind, num) = name.split_at(1);
        let n: usize = num.parse().map_err(|_| err())?;
        match kind {
            "Z" if n >= 1 => Ok(FiniteGroup::cyclic(n)),
            "D" if n >= 1 => Ok(FiniteGroup::dihedral(n)),
            "S" if (2..=5).contains(&n) => Ok(FiniteGroup::symmetric(n)),
            _ => Err(err()),
        }
    }

    /// The groups every cross-backend suite runs over.
    pub fn builtin_names() -> &'static [&'static str] {
        &["Z2", "Z3", "Z4", "S3", "S4", "D4", "Q8", "A4"]
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

fn perm_is_even(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// Partition of a group into conjugation orbits. Class 0 is the
/// identity's class; classes are ordered by (size, smallest element).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClasses {
    pub class_of: Vec<usize>,
    pub representatives: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClasses {
    let n = g.order;
    let mut seen = vec![false; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let mut orbit: Vec<usize> = (0..n).map(|h| g.conj(h, x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &y in &orbit {
            seen[y] = true;
        }
        classes.push(orbit);
    }
    classes.sort_by_key(|c| (c.len(), c[0]));
    let mut class_of = vec![0; n];
    for (i, c) in classes.iter().enumerate() {
        for &y in c {
            class_of[y] = i;
        }
    }
    ConjugacyClasses {
        class_of,
        representatives: classes.iter().map(|c| c[0]).collect(),
        sizes: classes.iter().map(|c| c.len()).collect(),
    }
}

/// Order of the centralizer of x in g.
pub fn centralizer_order(g: &FiniteGroup, x: usize) -> usize {
    (0..g.order).filter(|&h| g.mul(h, x) == g.mul(x, h)).count()
}

/// A finitely presented group: generator count plus relator words.
/// Words are sequences of signed 1-based generator indices; negative
/// means the inverse of that generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub num_generators: usize,
    pub relators: Vec<Vec<i32>>,
    pub name: String,
}

impl GroupPresentation {
    pub fn new(num_generators: usize, relators: Vec<Vec<i32>>, name: &str) -> Result<Self> {
        for w in &relators {
            for &l in w {
                if l == 0 || (l.unsigned_abs() as usize) > num_generators {
                    return Err(Error::Presentation(format!(
                        "{name}: relator letter {l} out of range for {num_generators} generators"
                    )));
                }
            }
        }
        Ok(GroupPresentation { num_generators, relators, name: name.to_string() })
    }

    /// Standard genus-g surface group: 2g generators, one relator
    /// [a1,b1]...[ag,bg]. Genus 0 is the trivial presentation.
    pub fn surface(genus: usize) -> GroupPresentation {
        let mut relator = Vec::with_capacity(4 * genus);
        for i in 0..genus {
            let a = (2 * i + 1) as i32;
            let b = (2 * i + 2) as i32;
            relator.extend_from_slice(&[a, b, -a, -b]);
        }
        let relators = if genus == 0 { vec![] } else { vec![relator] };
        GroupPresentation {
            num_generators: 2 * genus,
            relators,
            name: format!("surface_genus_{genus}"),
        }
    }

    /// pi_1 of the lens space L(p,q) = Z/p; q does not enter.
    pub fn lens(p: u64) -> GroupPresentation {
        GroupPresentation {
            num_generators: 1,
            relators: vec![vec![1; p as usize]],
            name: format!("lens_{p}"),
        }
    }

    /// pi_1 of the 3-torus: three commuting generators.
    pub fn torus3() -> GroupPresentation {
        GroupPresentation {
            num_generators: 3,
            relators: vec![
                vec![1, 2, -1, -2],
                vec![1, 3, -1, -3],
                vec![2, 3, -2, -3],
            ],
            name: "torus3".to_string(),
        }
    }

    /// Text format: first non-empty line is the generator count, each
    /// following non-empty line one relator word like `a b a^-1 b^-1`.
    pub fn parse(text: &str) -> Result<GroupPresentation> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let first = lines
            .next()
            .ok_or_else(|| Error::Presentation("empty presentation file".into()))?;
        let num_generators: usize = first
            .parse()
            .map_err(|_| Error::Presentation(format!("bad generator count {first:?}")))?;
        if num_generators > 26 {
            return Err(Error::Presentation("at most 26 named generators (a-z)".into()));
        }
        let mut relators = Vec::new();
        for line in lines {
            let mut word = Vec::new();
            for tok in line.split_whitespace() {
                let (name, exp) = match tok.split_once('^') {
                    Some((n, e)) => {
                        let e: i64 = e.parse().map_err(|_| {
                            Error::Presentation(format!("bad exponent in token {tok:?}"))
                        })?;
                        (n, e)
                    }
                    None => (tok, 1),
                };
                let mut chars = name.chars();
                let (Some(c), None) = (chars.next(), chars.next()) else {
                    return Err(Error::Presentation(format!("bad generator token {tok:?}")));
                };
                if !c.is_ascii_lowercase() {
                    return Err(Error::Presentation(format!("bad generator token {tok:?}")));
                }
                let idx = (c as u8 - b'a') as i32 + 1;
                let letter = if exp >= 0 { idx } else { -idx };
                for _ in 0..exp.unsigned_abs() {
                    word.push(letter);
                }
            }
            relators.push(word);
        }
        GroupPresentation::new(num_generators, relators, "custom")
    }
}

fn word_holds(g: &FiniteGroup, word: &[i32], assignment: &[usize]) -> bool {
    let mut acc = g.identity;
    for &l in word {
        let x = assignment[l.unsigned_abs() as usize - 1];
        let x = if l < 0 { g.inv(x) } else { x };
        acc = g.mul(acc, x);
    }
    acc == g.identity
}

/// Number of homomorphisms from the presented group into g, by direct
/// enumeration of all `order^num_generators` generator assignments.
pub fn hom_count(p: &GroupPresentation, g: &FiniteGroup, cap: u64) -> Result<u64> {
    let trials = BigUint::from(g.order).pow(p.num_generators as u32);
    match trials.to_u64() {
        Some(t) if t <= cap => {}
        _ => {
            return Err(Error::ResourceCap {
                detail: format!(
                    "hom_count needs {trials} assignments ({} generators over {})",
                    p.num_generators, g.name
                ),
                cap,
            })
        }
    }
    let mut assignment = vec![0usize; p.num_generators];
    let mut count = 0u64;
    loop {
        if p.relators.iter().all(|w| word_holds(g, w, &assignment)) {
            count += 1;
        }
        // mixed-radix increment
        let mut i = 0;
        loop {
            if i == p.num_generators {
                return Ok(count);
            }
            assignment[i] += 1;
            if assignment[i] < g.order {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}
