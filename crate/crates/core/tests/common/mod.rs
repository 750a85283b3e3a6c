//! Independent oracles shared by the integration tests. Nothing here calls the
//! crate's elimination, rewriting or prolongation code.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational as Q;
use num_traits::{One, Zero};
use tanaka_core::exact_arith::GaussianRational;
use tanaka_core::free_lie::Tree;
use tanaka_core::symbol::CRSymbol;

// ------------------------------------------------------------ Lyndon words

/// Number of Lyndon words of length `d` over `k` letters, by enumeration.
pub fn lyndon_count(k: usize, d: usize) -> u64 {
    let mut count = 0;
    let mut word = vec![0usize; d];
    loop {
        let lyndon = (1..d).all(|r| {
            let rotated: Vec<usize> = word[r..].iter().chain(&word[..r]).copied().collect();
            word < rotated
        });
        if lyndon {
            count += 1;
        }
        // next word in base k
        let mut i = d;
        loop {
            if i == 0 {
                return count;
            }
            i -= 1;
            word[i] += 1;
            if word[i] < k {
                break;
            }
            word[i] = 0;
        }
    }
}

// ------------------------------------------------------------ associative embedding

/// Noncommutative polynomial: word → coefficient.
pub type Poly = BTreeMap<Vec<usize>, GaussianRational>;

pub fn poly_add(a: &mut Poly, b: &Poly, c: &GaussianRational) {
    for (w, x) in b {
        let e = a.entry(w.clone()).or_insert_with(GaussianRational::zero);
        *e += &(x * c);
        if e.is_zero() {
            a.remove(w);
        }
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (u, x) in a {
        for (v, y) in b {
            let w: Vec<usize> = u.iter().chain(v).copied().collect();
            poly_add(&mut out, &Poly::from([(w, GaussianRational::one())]), &(x * y));
        }
    }
    out
}

/// Image of a bracket tree under `[a, b] ↦ ab − ba`.
pub fn tree_poly(t: &Tree) -> Poly {
    match t {
        Tree::Leaf(g) => Poly::from([(vec![*g], GaussianRational::one())]),
        Tree::Node(a, b) => {
            let (pa, pb) = (tree_poly(a), tree_poly(b));
            let mut out = poly_mul(&pa, &pb);
            poly_add(&mut out, &poly_mul(&pb, &pa), &GaussianRational::from_int(-1));
            out
        }
    }
}

// ------------------------------------------------------------ dense rational algebra

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Null space of the matrix with the given rows, by plain Gauss–Jordan.
pub fn nullspace(rows: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let mut reduced: Vec<(usize, Vec<Q>)> = Vec::new();
    for mut row in rows {
        for (p, r) in &reduced {
            if !row[*p].is_zero() {
                let f = row[*p].clone();
                for k in 0..ncols {
                    if !r[k].is_zero() {
                        row[k] = &row[k] - &(&f * &r[k]);
                    }
                }
            }
        }
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { continue };
        let inv = Q::one() / &row[p];
        for x in row.iter_mut() {
            *x = &*x * &inv;
        }
        for (_, r) in reduced.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for k in 0..ncols {
                    if !row[k].is_zero() {
                        r[k] = &r[k] - &(&f * &row[k]);
                    }
                }
            }
        }
        reduced.push((p, row));
    }
    let pivots: Vec<usize> = reduced.iter().map(|(p, _)| *p).collect();
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (p, r) in &reduced {
                v[*p] = -r[f].clone();
            }
            v
        })
        .collect()
}

/// A real graded nilpotent algebra with a complex structure on degree −1.
pub struct RealAlgebra {
    pub dims: Vec<usize>,
    /// `br[a][b]`, dense over the whole basis.
    pub br: Vec<Vec<Vec<Q>>>,
    /// `J` on degree −1, `j[row][col]`.
    pub j: Vec<Vec<Q>>,
}

impl RealAlgebra {
    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn offset(&self, d: usize) -> usize {
        self.dims[..d - 1].iter().sum()
    }

    pub fn degree(&self, a: usize) -> usize {
        let mut acc = 0;
        for (i, d) in self.dims.iter().enumerate() {
            acc += d;
            if a < acc {
                return i + 1;
            }
        }
        unreachable!()
    }

    /// `[x, y] = z`, `Jx = y`.
    pub fn heisenberg() -> Self {
        let z = || vec![q(0); 3];
        let mut br = vec![vec![z(); 3]; 3];
        br[0][1][2] = q(1);
        br[1][0][2] = q(-1);
        RealAlgebra {
            dims: vec![2, 1],
            br,
            j: vec![vec![q(0), q(-1)], vec![q(1), q(0)]],
        }
    }

    /// Real structure read off the symbol's real basis; `J` is recomputed from
    /// the complex coordinates of the degree −1 basis.
    pub fn from_symbol(s: &CRSymbol) -> Self {
        let rf = s.real_form().unwrap();
        let total = rf.total_dim();
        let mut br = vec![vec![vec![q(0); total]; total]; total];
        for ((a, b), row) in rf.structure_constants() {
            for (k, c) in row {
                br[*a][*b][*k] = c.as_big().clone();
                br[*b][*a][*k] = -c.as_big().clone();
            }
        }
        let n = s.n();
        let deg1 = rf.degree_basis(1);
        // realified coordinates of a degree −1 complex vector
        let realify = |x: &tanaka_core::free_lie::AlgebraElement| -> Vec<Q> {
            let mut v = vec![q(0); 4 * n];
            for (k, c) in x.iter() {
                v[2 * k] = c.re.as_big().clone();
                v[2 * k + 1] = c.im.as_big().clone();
            }
            v
        };
        let cols: Vec<Vec<Q>> = deg1.iter().map(realify).collect();
        let mut j = vec![vec![q(0); 2 * n]; 2 * n];
        for (k, v) in deg1.iter().enumerate() {
            let jv: tanaka_core::free_lie::AlgebraElement = v
                .iter()
                .map(|(g, c)| {
                    let f = if g < n { GaussianRational::i() } else { -GaussianRational::i() };
                    (g, c * &f)
                })
                .collect();
            let target = realify(&jv);
            // solve Σ a_c cols[c] = target through the null space of [cols | -target]
            let rows: Vec<Vec<Q>> = (0..4 * n)
                .map(|r| {
                    let mut row: Vec<Q> = cols.iter().map(|c| c[r].clone()).collect();
                    row.push(-target[r].clone());
                    row
                })
                .collect();
            let ns = nullspace(rows, 2 * n + 1);
            let sol = ns.iter().find(|v| !v[2 * n].is_zero()).expect("J preserves the real span");
            for r in 0..2 * n {
                j[r][k] = &sol[r] / &sol[2 * n];
            }
        }
        RealAlgebra {
            dims: rf.dims(),
            br,
            j,
        }
    }
}

/// A map of the prolongation: `images[a]` lives in `g̃^{ℓ − deg a}`.
type OracleMap = Vec<Vec<Q>>;

struct Oracle<'a> {
    alg: &'a RealAlgebra,
    levels: Vec<Vec<OracleMap>>,
}

impl Oracle<'_> {
    fn space(&self, t: i64) -> usize {
        if t < 0 {
            let d = (-t) as usize;
            if d > self.alg.dims.len() {
                0
            } else {
                self.alg.dims[d - 1]
            }
        } else {
            self.levels[t as usize].len()
        }
    }

    /// `[v, e_b]` for `v ∈ g̃^t`.
    fn act(&self, t: i64, v: &[Q], b: usize) -> Vec<Q> {
        let db = self.alg.degree(b) as i64;
        let out_dim = self.space(t - db);
        let mut out = vec![q(0); out_dim];
        if out_dim == 0 {
            return out;
        }
        if t < 0 {
            let d = (-t) as usize;
            let off = self.alg.offset(d);
            let off2 = self.alg.offset(d + db as usize);
            for (k, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (i, x) in self.alg.br[off + k][b].iter().enumerate() {
                    if !x.is_zero() {
                        out[i - off2] += c * x;
                    }
                }
            }
        } else {
            for (k, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (i, x) in self.levels[t as usize][k][b].iter().enumerate() {
                    out[i] += c * x;
                }
            }
        }
        out
    }

    fn residual(&self, l: usize, x: &OracleMap, a: usize, b: usize) -> Vec<Q> {
        let alg = self.alg;
        let (da, db) = (alg.degree(a) as i64, alg.degree(b) as i64);
        let l = l as i64;
        let target = l - da - db;
        if self.space(target) == 0 {
            return Vec::new();
        }
        let mut r = self.act(l - da, &x[a], b);
        let s = self.act(l - db, &x[b], a);
        for (ri, si) in r.iter_mut().zip(&s) {
            *ri -= si;
        }
        for (c, coef) in alg.br[a][b].iter().enumerate() {
            if !coef.is_zero() {
                for (ri, xi) in r.iter_mut().zip(&x[c]) {
                    *ri -= coef * xi;
                }
            }
        }
        r
    }

    fn next_level(&self) -> Vec<OracleMap> {
        let alg = self.alg;
        let l = self.levels.len();
        let total = alg.total();
        let sizes: Vec<usize> = (0..total)
            .map(|a| self.space(l as i64 - alg.degree(a) as i64))
            .collect();
        let unknowns: usize = sizes.iter().sum();
        let unflatten = |v: &[Q]| -> OracleMap {
            let mut out = Vec::new();
            let mut pos = 0;
            for s in &sizes {
                out.push(v[pos..pos + s].to_vec());
                pos += s;
            }
            out
        };
        // columns of the constraint matrix, one unit unknown at a time
        let mut columns: Vec<Vec<Q>> = Vec::new();
        for u in 0..unknowns {
            let mut unit = vec![q(0); unknowns];
            unit[u] = q(1);
            let x = unflatten(&unit);
            let mut col = Vec::new();
            for a in 0..total {
                for b in a + 1..total {
                    col.extend(self.residual(l, &x, a, b));
                }
            }
            if l == 0 {
                // D J = J D on degree −1
                let n1 = alg.dims[0];
                for a in 0..n1 {
                    for r in 0..n1 {
                        let mut v = q(0);
                        for (c, xc) in x.iter().enumerate().take(n1) {
                            v += &alg.j[c][a] * &xc[r];
                            v -= &alg.j[r][c] * &x[a][c];
                        }
                        col.push(v);
                    }
                }
            }
            columns.push(col);
        }
        let nrows = columns.first().map_or(0, Vec::len);
        let rows: Vec<Vec<Q>> = (0..nrows)
            .map(|r| columns.iter().map(|c| c[r].clone()).collect())
            .collect();
        nullspace(rows, unknowns).iter().map(|v| unflatten(v)).collect()
    }
}

/// Real dimensions of levels 0, 1, … of the prolongation, stopping after the
/// first zero level or at `max_level`.
pub fn brute_force_prolongation(alg: &RealAlgebra, max_level: usize) -> Vec<usize> {
    let mut o = Oracle { alg, levels: Vec::new() };
    let mut dims = Vec::new();
    while o.levels.len() <= max_level {
        let level = o.next_level();
        dims.push(level.len());
        let zero = level.is_empty();
        o.levels.push(level);
        if zero {
            break;
        }
    }
    dims
}
