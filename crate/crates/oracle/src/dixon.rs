//! Character tables by eigenspace splitting of class-algebra matrices.
//!
//! The class multiplication coefficients a_ijk are computed by counting,
//! reduced modulo a prime l with l = 1 mod exp(G) and l > 2 sqrt(|G|), and
//! the common eigenvectors of the matrices B_i = (a_ijk)_jk are exactly the
//! central characters mod l. Degrees come from the second orthogonality
//! relation, and values are lifted exactly into cyclotomic integers through
//! a discrete Fourier transform over the power maps.

use crate::group::{Enumerated, Monoid};
use crate::OracleError;
use cyclo::{rat, zeta, Cyclotomic};

/// An exact ordinary character table of a concrete group.
pub struct CharTable {
    pub group_order: u64,
    pub class_sizes: Vec<u64>,
    pub class_orders: Vec<u64>,
    /// power_map[i][s] = class index of rep_i^s (s < class_orders[i]).
    pub power_map: Vec<Vec<u32>>,
    /// Rows are characters, sorted by degree then value vector; column 0 is
    /// the identity class.
    pub chars: Vec<Vec<Cyclotomic>>,
}

impl CharTable {
    /// Degrees as plain integers.
    #[must_use]
    pub fn degrees(&self) -> Vec<u64> {
        self.chars
            .iter()
            .map(|row| {
                let r = row[0].as_rational().expect("degree is rational");
                let n = r.to_integer();
                u64::try_from(n).expect("degree is a positive integer")
            })
            .collect()
    }

    /// Classes whose element order is divisible by p.
    #[must_use]
    pub fn p_singular_classes(&self, p: u64) -> Vec<usize> {
        (0..self.class_orders.len())
            .filter(|&i| self.class_orders[i] % p == 0)
            .collect()
    }

    /// Classes of nontrivial p-power order.
    #[must_use]
    pub fn p_element_classes(&self, p: u64) -> Vec<usize> {
        (0..self.class_orders.len())
            .filter(|&i| {
                let mut o = self.class_orders[i];
                if o == 1 {
                    return false;
                }
                while o % p == 0 {
                    o /= p;
                }
                o == 1
            })
            .collect()
    }
}

fn mulm(a: u64, b: u64, l: u64) -> u64 {
    ((a as u128 * b as u128) % l as u128) as u64
}

fn powm(mut a: u64, mut k: u64, l: u64) -> u64 {
    let mut acc = 1u64;
    a %= l;
    while k > 0 {
        if k & 1 == 1 {
            acc = mulm(acc, a, l);
        }
        a = mulm(a, a, l);
        k >>= 1;
    }
    acc
}

fn invm(a: u64, l: u64) -> u64 {
    powm(a, l - 2, l)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    true
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Smallest prime l = 1 mod m with l > bound.
fn find_prime(m: u64, bound: u64) -> u64 {
    let mut l = m + 1;
    loop {
        if l > bound && is_prime(l) {
            return l;
        }
        l += m;
    }
}

fn primitive_root(l: u64) -> u64 {
    let mut rest = l - 1;
    let mut prime_factors = Vec::new();
    let mut d = 2;
    while d * d <= rest {
        if rest % d == 0 {
            prime_factors.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        prime_factors.push(rest);
    }
    'cand: for e in 2..l {
        for &p in &prime_factors {
            if powm(e, (l - 1) / p, l) == 1 {
                continue 'cand;
            }
        }
        return e;
    }
    unreachable!("every prime has a primitive root")
}

/// Row-reduce vectors mod l; returns (echelon basis, pivot columns).
fn echelon(mut rows: Vec<Vec<u64>>, l: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut v in rows.drain(..) {
        for (b, &p) in basis.iter().zip(&pivots) {
            if v[p] != 0 {
                let c = v[p];
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + l - mulm(c, *y, l)) % l;
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x != 0) {
            let inv = invm(v[p], l);
            for x in v.iter_mut() {
                *x = mulm(*x, inv, l);
            }
            // Back-substitute to keep the basis fully reduced.
            for (b, &bp) in basis.iter_mut().zip(&pivots) {
                let _ = bp;
                let c = b[p];
                if c != 0 {
                    for (x, y) in b.iter_mut().zip(&v) {
                        *x = (*x + l - mulm(c, *y, l)) % l;
                    }
                }
            }
            basis.push(v);
            pivots.push(p);
        }
    }
    // Sort by pivot for determinism.
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&i| pivots[i]);
    let basis = order.iter().map(|&i| basis[i].clone()).collect();
    let pivots = order.iter().map(|&i| pivots[i]).collect();
    (basis, pivots)
}

/// Characteristic polynomial coefficients (monic, degree d) mod l via the
/// Faddeev-LeVerrier recurrence; l is prime and exceeds d.
fn char_poly(a: &[Vec<u64>], l: u64) -> Vec<u64> {
    let d = a.len();
    let mut coeffs = vec![0u64; d + 1];
    coeffs[d] = 1;
    let mut n: Vec<Vec<u64>> = a.to_vec();
    let mut c_prev;
    for k in 1..=d {
        let tr: u64 = (0..d).fold(0, |s, i| (s + n[i][i]) % l);
        c_prev = mulm(tr, invm(k as u64, l), l);
        c_prev = (l - c_prev) % l;
        coeffs[d - k] = c_prev;
        if k == d {
            break;
        }
        // N <- A (N + c I).
        let mut shifted = n.clone();
        for i in 0..d {
            shifted[i][i] = (shifted[i][i] + c_prev) % l;
        }
        let mut next = vec![vec![0u64; d]; d];
        for i in 0..d {
            for t in 0..d {
                if a[i][t] == 0 {
                    continue;
                }
                let av = a[i][t];
                for j in 0..d {
                    next[i][j] = (next[i][j] + mulm(av, shifted[t][j], l)) % l;
                }
            }
        }
        n = next;
    }
    coeffs
}

/// Null space basis of (a - lambda I) mod l, vectors in the matrix's own
/// coordinates.
fn eigen_null_space(a: &[Vec<u64>], lambda: u64, l: u64) -> Vec<Vec<u64>> {
    let d = a.len();
    let mut m: Vec<Vec<u64>> = a.to_vec();
    for i in 0..d {
        m[i][i] = (m[i][i] + l - lambda) % l;
    }
    // Gaussian elimination to reduced echelon, tracking pivot columns.
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..d {
        if let Some(r) = (row..d).find(|&r| m[r][col] != 0) {
            m.swap(row, r);
            let inv = invm(m[row][col], l);
            for x in m[row].iter_mut() {
                *x = mulm(*x, inv, l);
            }
            for r2 in 0..d {
                if r2 != row && m[r2][col] != 0 {
                    let c = m[r2][col];
                    let src = m[row].clone();
                    for (x, y) in m[r2].iter_mut().zip(&src) {
                        *x = (*x + l - mulm(c, *y, l)) % l;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
    }
    let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![0u64; d];
        v[fc] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = (l - m[ri][fc]) % l;
        }
        basis.push(v);
    }
    basis
}

/// Compute the exact character table of an enumerated group.
pub fn dixon_table<M: Monoid>(m: &M, g: &Enumerated<M::E>) -> Result<CharTable, OracleError> {
    let r = g.classes.len();
    if r > 64 {
        return Err(OracleError::Internal(format!(
            "class count {r} exceeds the supported maximum of 64"
        )));
    }
    let n = g.order();

    // Structure constants: b[i][j][k] = #{x in C_i : x^{-1} z_k in C_j}.
    let mut b = vec![vec![vec![0u64; r]; r]; r];
    for k in 0..r {
        let zk = g.classes[k].rep;
        for i in 0..r {
            for &x in &g.members[i] {
                let xi = g.inverse[x as usize];
                let y = m.mul(&g.elements[xi as usize], &g.elements[zk as usize]);
                let j = g.class_of[g.index[&y] as usize] as usize;
                b[i][j][k] += 1;
            }
        }
    }
    // Burnside consistency: sum_k a_ijk |C_k| = |C_i| |C_j|.
    for i in 0..r {
        for j in 0..r {
            let s: u64 = (0..r).map(|k| b[i][j][k] * g.classes[k].size).sum();
            if s != g.classes[i].size * g.classes[j].size {
                return Err(OracleError::Internal(format!(
                    "structure constants violate the counting identity at ({i}, {j})"
                )));
            }
        }
    }

    let l = find_prime(g.exponent, 2 * isqrt(n) + 1);

    // Split the column space of the commuting family B_i into common
    // eigenspaces.
    let mut spaces: Vec<(Vec<Vec<u64>>, Vec<usize>)> = {
        let id: Vec<Vec<u64>> = (0..r)
            .map(|i| (0..r).map(|j| u64::from(i == j)).collect())
            .collect();
        vec![echelon(id, l)]
    };
    for i in 1..r {
        if spaces.iter().all(|(v, _)| v.len() == 1) {
            break;
        }
        let bi = &b[i];
        let mut next_spaces = Vec::new();
        for (basis, pivots) in spaces {
            let d = basis.len();
            if d == 1 {
                next_spaces.push((basis, pivots));
                continue;
            }
            // Restriction matrix: column s holds the coordinates of
            // B_i * basis_s in the basis.
            let mut restr = vec![vec![0u64; d]; d];
            for (s, bs) in basis.iter().enumerate() {
                let mut w = vec![0u64; r];
                for (jrow, wj) in w.iter_mut().enumerate() {
                    let mut acc = 0u64;
                    for k in 0..r {
                        if bi[jrow][k] != 0 && bs[k] != 0 {
                            acc = (acc + mulm(bi[jrow][k] % l, bs[k], l)) % l;
                        }
                    }
                    *wj = acc;
                }
                // Reduced echelon basis: coordinates are read at pivots.
                let coords: Vec<u64> = pivots.iter().map(|&p| w[p]).collect();
                for (t, c) in coords.iter().enumerate() {
                    for (wx, bx) in w.iter_mut().zip(&basis[t]) {
                        *wx = (*wx + l - mulm(*c, *bx, l)) % l;
                    }
                    restr[t][s] = *c;
                }
                if w.iter().any(|&x| x != 0) {
                    return Err(OracleError::Internal(
                        "subspace not invariant under class algebra".to_string(),
                    ));
                }
            }
            let poly = char_poly(&restr, l);
            let mut found = 0;
            for lambda in 0..l {
                // Horner evaluation.
                let mut acc = 0u64;
                for c in poly.iter().rev() {
                    acc = (mulm(acc, lambda, l) + c) % l;
                }
                if acc != 0 {
                    continue;
                }
                let null = eigen_null_space(&restr, lambda, l);
                found += null.len();
                let ambient: Vec<Vec<u64>> = null
                    .iter()
                    .map(|u| {
                        let mut v = vec![0u64; r];
                        for (t, &c) in u.iter().enumerate() {
                            for (x, y) in v.iter_mut().zip(&basis[t]) {
                                *x = (*x + mulm(c, *y, l)) % l;
                            }
                        }
                        v
                    })
                    .collect();
                next_spaces.push(echelon(ambient, l));
                if found == d {
                    break;
                }
            }
            if found != d {
                return Err(OracleError::Internal(
                    "class algebra matrix failed to split over F_l".to_string(),
                ));
            }
        }
        spaces = next_spaces;
    }
    if !spaces.iter().all(|(v, _)| v.len() == 1) {
        return Err(OracleError::Internal(
            "eigenspace splitting did not reach dimension one".to_string(),
        ));
    }

    // Central characters: normalize each eigenvector at the identity class.
    let mut omegas: Vec<Vec<u64>> = Vec::new();
    for (basis, _) in &spaces {
        let v = &basis[0];
        if v[0] == 0 {
            return Err(OracleError::Internal(
                "central character vanishes at the identity".to_string(),
            ));
        }
        let c = invm(v[0], l);
        omegas.push(v.iter().map(|&x| mulm(x, c, l)).collect());
    }

    // Degrees from the second orthogonality relation.
    let inv_class: Vec<usize> = (0..r)
        .map(|i| g.class_of[g.inverse[g.classes[i].rep as usize] as usize] as usize)
        .collect();
    let nl = n % l;
    let mut degrees = Vec::with_capacity(r);
    for om in &omegas {
        let mut t = 0u64;
        for i in 0..r {
            let term = mulm(om[i], om[inv_class[i]], l);
            t = (t + mulm(term, invm(g.classes[i].size % l, l), l)) % l;
        }
        let target = mulm(nl, invm(t, l), l);
        let mut d = 0;
        for cand in 1..=(l - 1) / 2 {
            if mulm(cand, cand, l) == target {
                d = cand;
                break;
            }
        }
        if d == 0 {
            return Err(OracleError::Internal(
                "no degree below l/2 squares to the orthogonality target".to_string(),
            ));
        }
        degrees.push(d);
    }

    // Exact value lifting via DFT over the power maps.
    let root = primitive_root(l);
    let mut chars: Vec<Vec<Cyclotomic>> = Vec::with_capacity(r);
    for (om, &d) in omegas.iter().zip(&degrees) {
        let valm: Vec<u64> = (0..r)
            .map(|i| mulm(mulm(d, om[i], l), invm(g.classes[i].size % l, l), l))
            .collect();
        let mut row = Vec::with_capacity(r);
        for i in 0..r {
            let mi = g.classes[i].order;
            let z = powm(root, (l - 1) / mi, l);
            let zinv = invm(z, l);
            let minv = invm(mi % l, l);
            let mut val = Cyclotomic::zero();
            for t in 0..mi {
                let mut c = 0u64;
                for (s, &cls) in g.power_map[i].iter().enumerate() {
                    c = (c + mulm(valm[cls as usize], powm(zinv, (s as u64 * t) % mi, l), l)) % l;
                }
                c = mulm(c, minv, l);
                let signed: i64 = if c > l / 2 { c as i64 - l as i64 } else { c as i64 };
                if signed != 0 {
                    val = &val + &zeta(mi, t as i64)?.scale(&rat(signed));
                }
            }
            row.push(val);
        }
        chars.push(row);
    }

    // Exact verification: degree sum and full row orthogonality.
    let degree_sq: u64 = degrees.iter().map(|d| d * d).sum();
    if degree_sq != n {
        return Err(OracleError::Internal(format!(
            "degrees squared sum to {degree_sq}, group order is {n}"
        )));
    }
    let sizes: Vec<u64> = g.classes.iter().map(|c| c.size).collect();
    for a in 0..r {
        for bidx in a..r {
            let mut s = Cyclotomic::zero();
            for i in 0..r {
                let term = &chars[a][i] * &chars[bidx][i].conj();
                s = &s + &term.scale(&rat(sizes[i] as i64));
            }
            let expected = if a == bidx {
                Cyclotomic::from_int(n as i64)
            } else {
                Cyclotomic::zero()
            };
            if s != expected {
                return Err(OracleError::Internal(format!(
                    "row orthogonality fails for characters {a} and {bidx}"
                )));
            }
        }
    }

    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&x, &y| {
        degrees[x]
            .cmp(&degrees[y])
            .then_with(|| chars[x].cmp(&chars[y]))
    });
    let chars = order.into_iter().map(|i| chars[i].clone()).collect();

    Ok(CharTable {
        group_order: n,
        class_sizes: sizes,
        class_orders: g.classes.iter().map(|c| c.order).collect(),
        power_map: g.power_map.clone(),
        chars,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::enumerate;

    struct Sym(usize);
    impl Monoid for Sym {
        type E = Vec<u8>;
        fn one(&self) -> Vec<u8> {
            (0..self.0 as u8).collect()
        }
        fn mul(&self, a: &Vec<u8>, b: &Vec<u8>) -> Vec<u8> {
            b.iter().map(|&i| a[i as usize]).collect()
        }
    }

    #[test]
    fn symmetric_group_table() {
        let m = Sym(4);
        let g = enumerate(&m, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 100).unwrap();
        assert_eq!(g.order(), 24);
        let t = dixon_table(&m, &g).unwrap();
        let mut degrees = t.degrees();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 1, 2, 3, 3]);
    }

    #[test]
    fn quaternion_like_table_via_matrices() {
        // SL(2,3) built directly here from its defining generators.
        use crate::groups::sl2;
        let (m, g) = sl2(3).unwrap();
        let t = dixon_table(&m, &g).unwrap();
        assert_eq!(t.group_order, 24);
        let mut degrees = t.degrees();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn dihedral_table_has_rational_characters() {
        // The symmetries of a square: all character values are integers.
        struct Dihedral;
        impl Monoid for Dihedral {
            type E = (u8, u8);
            fn one(&self) -> (u8, u8) {
                (0, 0)
            }
            fn mul(&self, a: &(u8, u8), b: &(u8, u8)) -> (u8, u8) {
                // (r^i s^e)(r^j s^f) with s r s = r^-1.
                let (i, e) = *a;
                let (j, f) = *b;
                let jj = if e == 1 { (4 - j) % 4 } else { j };
                ((i + jj) % 4, (e + f) % 2)
            }
        }
        let m = Dihedral;
        let g = enumerate(&m, &[(1, 0), (0, 1)], 100).unwrap();
        assert_eq!(g.order(), 8);
        let t = dixon_table(&m, &g).unwrap();
        let mut degrees = t.degrees();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 1, 1, 1, 2]);
        for row in &t.chars {
            for v in row {
                assert!(v.as_rational().is_some());
            }
        }
    }
}

#[cfg(test)]
mod scratch {
    #[test]
    #[ignore]
    fn print_sz8() {
        let (m, g) = crate::groups::sz8().unwrap();
        let t = super::dixon_table(&m, &g).unwrap();
        println!("classes:");
        for (i, (&s, &o)) in t.class_sizes.iter().zip(&t.class_orders).enumerate() {
            println!("  c{i}: size {s} order {o}");
        }
        for (r, row) in t.chars.iter().enumerate() {
            let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            println!("chi{r}: {}", vals.join(" | "));
        }
    }
}
