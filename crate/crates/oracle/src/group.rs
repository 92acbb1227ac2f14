//! Generator-driven enumeration of a finite group together with its
//! conjugacy structure: classes, sizes, representative orders, inverse
//! pairing, and power maps. Everything downstream of this module treats
//! the group abstractly through these data.

use crate::OracleError;
use std::collections::HashMap;
use std::hash::Hash;

/// A multiplication context for group elements; the element type itself
/// stays plain data so that matrix packings and cyclotomic matrices share
/// the machinery.
pub trait Monoid {
    type E: Clone + Eq + Hash;
    fn one(&self) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

/// One conjugacy class: a representative (by element index), its size, and
/// the order of its elements.
#[derive(Debug, Clone)]
pub struct Class {
    pub rep: u32,
    pub size: u64,
    pub order: u64,
}

/// A fully enumerated group with conjugacy data.
pub struct Enumerated<E> {
    pub elements: Vec<E>,
    pub index: HashMap<E, u32>,
    pub inverse: Vec<u32>,
    pub classes: Vec<Class>,
    pub class_of: Vec<u32>,
    /// Element indices grouped by class.
    pub members: Vec<Vec<u32>>,
    /// power_map[i][s] = class of rep_i^s, for s in 0..order(rep_i).
    pub power_map: Vec<Vec<u32>>,
    pub exponent: u64,
}

impl<E> Enumerated<E> {
    #[must_use]
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// The p-part of the group order.
    #[must_use]
    pub fn order_p_part(&self, p: u64) -> u64 {
        let mut n = self.order();
        let mut part = 1;
        while n % p == 0 {
            n /= p;
            part *= p;
        }
        part
    }

    /// Classes whose elements have order divisible by p.
    #[must_use]
    pub fn p_singular_classes(&self, p: u64) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| self.classes[i].order % p == 0)
            .collect()
    }

    /// Classes of nontrivial p-elements (order a positive power of p).
    #[must_use]
    pub fn p_element_classes(&self, p: u64) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| {
                let o = self.classes[i].order;
                o > 1 && is_p_power(o, p)
            })
            .collect()
    }
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Enumerate the group generated by `gens`, failing above `cap` elements,
/// and compute its conjugacy data.
pub fn enumerate<M: Monoid>(
    m: &M,
    gens: &[M::E],
    cap: usize,
) -> Result<Enumerated<M::E>, OracleError> {
    let mut elements: Vec<M::E> = vec![m.one()];
    let mut index: HashMap<M::E, u32> = HashMap::new();
    index.insert(m.one(), 0);
    let mut frontier = vec![0u32];
    while let Some(i) = frontier.pop() {
        let x = elements[i as usize].clone();
        for g in gens {
            let y = m.mul(&x, g);
            if !index.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(OracleError::TooLarge(cap));
                }
                let id = elements.len() as u32;
                index.insert(y.clone(), id);
                elements.push(y);
                frontier.push(id);
            }
        }
    }

    // Inverses by chasing each element's power cycle.
    let n = elements.len();
    let mut inverse = vec![0u32; n];
    let mut order_of = vec![0u64; n];
    for i in 0..n {
        let mut prev = i as u32;
        let mut cur = i as u32;
        let mut ord = 1u64;
        while cur != 0 {
            prev = cur;
            let next = m.mul(&elements[cur as usize], &elements[i]);
            cur = index[&next];
            ord += 1;
        }
        if i == 0 {
            inverse[0] = 0;
            order_of[0] = 1;
        } else {
            inverse[i] = prev;
            order_of[i] = ord;
        }
    }

    // Conjugacy classes: orbit of each unvisited element under conjugation
    // by the generators (which suffices, since conjugation by a product is
    // the composite of conjugations).
    let gen_idx: Vec<u32> = gens.iter().map(|g| index[g]).collect();
    let mut class_of = vec![u32::MAX; n];
    let mut classes: Vec<Class> = Vec::new();
    let mut members: Vec<Vec<u32>> = Vec::new();
    for start in 0..n as u32 {
        if class_of[start as usize] != u32::MAX {
            continue;
        }
        let cid = classes.len() as u32;
        let mut orbit = vec![start];
        class_of[start as usize] = cid;
        let mut pos = 0;
        while pos < orbit.len() {
            let x = orbit[pos];
            pos += 1;
            for &g in &gen_idx {
                let gx = m.mul(&elements[g as usize], &elements[x as usize]);
                let gxg = m.mul(&gx, &elements[inverse[g as usize] as usize]);
                let y = index[&gxg];
                if class_of[y as usize] == u32::MAX {
                    class_of[y as usize] = cid;
                    orbit.push(y);
                }
            }
        }
        classes.push(Class {
            rep: start,
            size: orbit.len() as u64,
            order: order_of[start as usize],
        });
        members.push(orbit);
    }

    // Power maps over each representative's cycle.
    let mut power_map = Vec::with_capacity(classes.len());
    for c in &classes {
        let mut pm = Vec::with_capacity(c.order as usize);
        let mut cur = 0u32;
        for _ in 0..c.order {
            pm.push(class_of[cur as usize]);
            cur = index[&m.mul(&elements[cur as usize], &elements[c.rep as usize])];
        }
        power_map.push(pm);
    }

    let exponent = classes
        .iter()
        .fold(1u64, |acc, c| num_integer::lcm(acc, c.order));

    Ok(Enumerated {
        elements,
        index,
        inverse,
        classes,
        class_of,
        members,
        power_map,
        exponent,
    })
}

/// Order of the derived subgroup: the normal closure of the commutators of
/// the given generators.
pub fn derived_subgroup_order<M: Monoid>(m: &M, g: &Enumerated<M::E>, gens: &[M::E]) -> u64 {
    let gi: Vec<u32> = gens.iter().map(|x| g.index[x]).collect();
    let mut seeds: Vec<u32> = Vec::new();
    for &a in &gi {
        for &b in &gi {
            let ab = g.index[&m.mul(&g.elements[a as usize], &g.elements[b as usize])];
            let ba = g.index[&m.mul(&g.elements[b as usize], &g.elements[a as usize])];
            let com = m.mul(
                &g.elements[ab as usize],
                &g.elements[g.inverse[ba as usize] as usize],
            );
            seeds.push(g.index[&com]);
        }
    }
    loop {
        // Subgroup generated by the current seeds: BFS from the identity
        // multiplying by seeds (inverses arise automatically in a finite
        // group).
        let mut in_sub = vec![false; g.elements.len()];
        in_sub[0] = true;
        let mut queue = vec![0u32];
        while let Some(x) = queue.pop() {
            for &s in &seeds {
                let y = g.index[&m.mul(&g.elements[x as usize], &g.elements[s as usize])];
                if !in_sub[y as usize] {
                    in_sub[y as usize] = true;
                    queue.push(y);
                }
            }
        }
        // Normality: every generator-conjugate of a member must stay
        // inside; otherwise grow the seed set and rebuild.
        let mut grew = false;
        for x in 0..g.elements.len() as u32 {
            if !in_sub[x as usize] {
                continue;
            }
            for &a in &gi {
                let ax = m.mul(&g.elements[a as usize], &g.elements[x as usize]);
                let axa = m.mul(&ax, &g.elements[g.inverse[a as usize] as usize]);
                let y = g.index[&axa];
                if !in_sub[y as usize] {
                    seeds.push(y);
                    grew = true;
                }
            }
        }
        if !grew {
            return in_sub.iter().filter(|&&b| b).count() as u64;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Z/n as a Monoid for cheap machinery tests.
    struct Cyclic(u64);
    impl Monoid for Cyclic {
        type E = u64;
        fn one(&self) -> u64 {
            0
        }
        fn mul(&self, a: &u64, b: &u64) -> u64 {
            (a + b) % self.0
        }
    }

    /// Permutations of {0..k} as Vec<u8>.
    struct Sym;
    impl Monoid for Sym {
        type E = Vec<u8>;
        fn one(&self) -> Vec<u8> {
            (0..3).collect()
        }
        fn mul(&self, a: &Vec<u8>, b: &Vec<u8>) -> Vec<u8> {
            b.iter().map(|&i| a[i as usize]).collect()
        }
    }

    #[test]
    fn cyclic_group_enumeration() {
        let m = Cyclic(12);
        let g = enumerate(&m, &[1], 100).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(g.classes.len(), 12);
        assert_eq!(g.exponent, 12);
        assert_eq!(g.order_p_part(2), 4);
        assert_eq!(g.order_p_part(3), 3);
        // Class orders are element orders in Z/12.
        let mut orders: Vec<u64> = g.classes.iter().map(|c| c.order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 3, 3, 4, 4, 6, 6, 12, 12, 12, 12]);
    }

    #[test]
    fn symmetric_group_classes() {
        let m = Sym;
        let g = enumerate(&m, &[vec![1, 0, 2], vec![0, 2, 1]], 100).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.classes.len(), 3);
        let mut sized: Vec<(u64, u64)> =
            g.classes.iter().map(|c| (c.size, c.order)).collect();
        sized.sort_unstable();
        assert_eq!(sized, vec![(1, 1), (2, 3), (3, 2)]);
        assert_eq!(
            derived_subgroup_order(&m, &g, &[vec![1, 0, 2], vec![0, 2, 1]]),
            3
        );
    }

    #[test]
    fn inverse_pairing() {
        let m = Cyclic(7);
        let g = enumerate(&m, &[1], 100).unwrap();
        for i in 0..7u32 {
            let inv = g.inverse[i as usize];
            assert_eq!(m.mul(&g.elements[i as usize], &g.elements[inv as usize]), 0);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let m = Cyclic(50);
        assert!(matches!(
            enumerate(&m, &[1], 10),
            Err(OracleError::TooLarge(10))
        ));
    }
}
