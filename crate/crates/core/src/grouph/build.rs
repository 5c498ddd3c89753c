//! Constructors for the stabilizer groups: cyclic, units and additive group
//! of a field, GL2 and PGL2, upper triangular groups and products.
//!
//! Keys encode field elements by their integer code, so element order is
//! lexicographic in the entries.

use std::sync::Arc;

use super::{quotient_by_central, FiniteGroup, GroupError, GroupHom, Quotient, CONSTRUCTION_CEILING};
use crate::field::{quadratic_extension, Element, FieldSpec};

fn too_large(what: &str, size: u64) -> GroupError {
    GroupError::TooLarge {
        what: what.into(),
        size,
        ceiling: CONSTRUCTION_CEILING as u64,
    }
}

pub fn cyclic(n: usize) -> Arc<FiniteGroup> {
    assert!(n >= 1, "cyclic group of order 0");
    let elems = (0..n).map(|i| (vec![i as u32], i.to_string())).collect();
    let g = FiniteGroup::from_keys(elems, |a, b| vec![((a[0] as usize + b[0] as usize) % n) as u32]);
    Arc::new(g.expect("cyclic group"))
}

struct Codes<'a> {
    f: &'a FieldSpec,
}

impl Codes<'_> {
    fn el(&self, c: u32) -> Element {
        self.f.decode(c)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        self.f.encode(&self.f.add(&self.el(a), &self.el(b)))
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.f.encode(&self.f.mul(&self.el(a), &self.el(b)))
    }

    fn inv(&self, a: u32) -> u32 {
        self.f.encode(&self.f.inv(&self.el(a)).expect("nonzero"))
    }

    fn label(&self, c: u32) -> String {
        self.el(c).to_string()
    }
}

pub fn unit_group(f: &FieldSpec) -> Result<Arc<FiniteGroup>, GroupError> {
    let c = Codes { f };
    if f.order() as usize - 1 > CONSTRUCTION_CEILING {
        return Err(too_large("unit group order", f.order() as u64 - 1));
    }
    let elems = (1..f.order()).map(|x| (vec![x], c.label(x))).collect();
    Ok(Arc::new(FiniteGroup::from_keys(elems, |a, b| vec![c.mul(a[0], b[0])])?))
}

pub fn additive_group(f: &FieldSpec) -> Result<Arc<FiniteGroup>, GroupError> {
    let c = Codes { f };
    if f.order() as usize > CONSTRUCTION_CEILING {
        return Err(too_large("additive group order", f.order() as u64));
    }
    let elems = (0..f.order()).map(|x| (vec![x], c.label(x))).collect();
    Ok(Arc::new(FiniteGroup::from_keys(elems, |a, b| vec![c.add(a[0], b[0])])?))
}

fn matrix_label(c: &Codes, m: &[u32]) -> String {
    format!("[{} {}; {} {}]", c.label(m[0]), c.label(m[1]), c.label(m[2]), c.label(m[3]))
}

fn mat_mul(c: &Codes, a: &[u32], b: &[u32]) -> Vec<u32> {
    vec![
        c.add(c.mul(a[0], b[0]), c.mul(a[1], b[2])),
        c.add(c.mul(a[0], b[1]), c.mul(a[1], b[3])),
        c.add(c.mul(a[2], b[0]), c.mul(a[3], b[2])),
        c.add(c.mul(a[2], b[1]), c.mul(a[3], b[3])),
    ]
}

fn det_nonzero(c: &Codes, m: &[u32]) -> bool {
    let f = c.f;
    let d = f.sub(&f.mul(&c.el(m[0]), &c.el(m[3])), &f.mul(&c.el(m[1]), &c.el(m[2])));
    !d.is_zero()
}

/// Scales a matrix so its first nonzero entry is 1.
fn projective_canonical(c: &Codes, m: &[u32]) -> Vec<u32> {
    let lead = *m.iter().find(|&&x| x != 0).expect("nonzero matrix");
    let s = c.inv(lead);
    m.iter().map(|&x| c.mul(s, x)).collect()
}

fn all_matrices(q: u32) -> impl Iterator<Item = Vec<u32>> {
    (0..q.pow(4)).map(move |i| vec![i / (q * q * q), (i / (q * q)) % q, (i / q) % q, i % q])
}

pub fn gl2(f: &FieldSpec) -> Result<Arc<FiniteGroup>, GroupError> {
    let q = f.order() as u64;
    let size = (q * q - 1) * (q * q - q);
    if size > CONSTRUCTION_CEILING as u64 {
        return Err(too_large("GL2 order", size));
    }
    let c = Codes { f };
    let elems = all_matrices(f.order())
        .filter(|m| det_nonzero(&c, m))
        .map(|m| {
            let l = matrix_label(&c, &m);
            (m, l)
        })
        .collect();
    Ok(Arc::new(FiniteGroup::from_keys(elems, |a, b| mat_mul(&c, a, b))?))
}

/// PGL2 on canonical representatives (first nonzero entry 1).
pub fn pgl2(f: &FieldSpec) -> Result<Arc<FiniteGroup>, GroupError> {
    let q = f.order() as u64;
    let size = q * (q * q - 1);
    if size > CONSTRUCTION_CEILING as u64 {
        return Err(too_large("PGL2 order", size));
    }
    let c = Codes { f };
    let elems = all_matrices(f.order())
        .filter(|m| det_nonzero(&c, m) && projective_canonical(&c, m) == *m)
        .map(|m| {
            let l = matrix_label(&c, &m);
            (m, l)
        })
        .collect();
    Ok(Arc::new(FiniteGroup::from_keys(elems, |a, b| {
        projective_canonical(&c, &mat_mul(&c, a, b))
    })?))
}

/// The scalar matrices of a group built by [`gl2`].
pub fn scalar_subgroup(gl2: &FiniteGroup) -> Vec<usize> {
    (0..gl2.order())
        .filter(|&i| {
            let k = gl2.key(i);
            k[1] == 0 && k[2] == 0 && k[0] == k[3]
        })
        .collect()
}

/// The group of matrices `[p q; 0 s]` with `p, s` units and `q` in `k^n`,
/// its diagonal torus and the inclusion of the torus.
#[derive(Clone, Debug)]
pub struct Triangular {
    pub depth: usize,
    pub group: Arc<FiniteGroup>,
    pub torus: Arc<FiniteGroup>,
    pub diagonal_inclusion: GroupHom,
}

impl Triangular {
    /// The central scalars `(a, a, 0)`.
    pub fn scalars(&self) -> Vec<usize> {
        let g = &self.group;
        (0..g.order())
            .filter(|&i| {
                let k = g.key(i);
                k[0] == k[1] && k[2..].iter().all(|&x| x == 0)
            })
            .collect()
    }

    pub fn modulo_scalars(&self) -> Result<Quotient, GroupError> {
        quotient_by_central(&self.group, &self.scalars())
    }
}

fn triangular_group_only(f: &FieldSpec, n: usize) -> Result<Arc<FiniteGroup>, GroupError> {
    let q = f.order() as u64;
    let size = q
        .checked_pow(n as u32)
        .and_then(|x| x.checked_mul((q - 1) * (q - 1)))
        .unwrap_or(u64::MAX);
    if size > CONSTRUCTION_CEILING as u64 {
        return Err(too_large("triangular group order", size));
    }
    let c = Codes { f };
    let qf = f.order();
    let mut elems = Vec::new();
    for p in 1..qf {
        for s in 1..qf {
            for v in 0..qf.pow(n as u32) {
                let mut key = vec![p, s];
                let mut rest = v;
                let mut entries = vec![0; n];
                for e in entries.iter_mut().rev() {
                    *e = rest % qf;
                    rest /= qf;
                }
                key.extend(entries);
                let label = format!(
                    "({}, {}, [{}])",
                    c.label(p),
                    c.label(s),
                    key[2..].iter().map(|&x| c.label(x)).collect::<Vec<_>>().join(", ")
                );
                elems.push((key, label));
            }
        }
    }
    // [p q; 0 s][p' q'; 0 s'] = [pp' pq' + qs'; 0 ss']
    let g = FiniteGroup::from_keys(elems, |a, b| {
        let mut out = vec![c.mul(a[0], b[0]), c.mul(a[1], b[1])];
        for i in 2..a.len() {
            out.push(c.add(c.mul(a[0], b[i]), c.mul(a[i], b[1])));
        }
        out
    })?;
    Ok(Arc::new(g))
}

pub fn triangular_group(f: &FieldSpec, n: usize) -> Result<Triangular, GroupError> {
    let group = triangular_group_only(f, n)?;
    let torus = if n == 0 {
        group.clone()
    } else {
        triangular_group_only(f, 0)?
    };
    let diagonal_inclusion = pad_inclusion(&torus, &group)?;
    Ok(Triangular {
        depth: n,
        group,
        torus,
        diagonal_inclusion,
    })
}

/// `(p, s, q) -> (p, s, q padded with zeros)` between triangular groups.
pub fn pad_inclusion(small: &Arc<FiniteGroup>, large: &Arc<FiniteGroup>) -> Result<GroupHom, GroupError> {
    let width = large.key(0).len();
    GroupHom::from_fn(small.clone(), large.clone(), |i| {
        let mut k = small.key(i).to_vec();
        k.resize(width, 0);
        large.index_of(&k).expect("padded element")
    })
}

/// `(p, s, q) -> [p q; 0 s]` from the depth-one triangular group into
/// `gl2`, or into `pgl2` when `projective` is set.
pub fn borel_inclusion(
    f: &FieldSpec,
    borel: &Arc<FiniteGroup>,
    target: &Arc<FiniteGroup>,
    projective: bool,
) -> Result<GroupHom, GroupError> {
    let c = Codes { f };
    GroupHom::from_fn(borel.clone(), target.clone(), |i| {
        let k = borel.key(i);
        let m = vec![k[0], k[2], 0, k[1]];
        let m = if projective { projective_canonical(&c, &m) } else { m };
        target.index_of(&m).expect("Borel element")
    })
}

/// `F_{q^2}^x / F_q^x` with the embedded base units as the kernel.
pub fn quadratic_units_mod_units(f: &FieldSpec) -> Result<Quotient, GroupError> {
    let (ext, emb) = quadratic_extension(f).map_err(|_| too_large("quadratic extension order", (f.order() as u64).pow(2)))?;
    let units = unit_group(&ext)?;
    let base: Vec<usize> = f
        .elements()
        .iter()
        .filter(|e| !e.is_zero())
        .map(|e| {
            let img = emb.apply(f, e);
            units.index_of(&[ext.encode(&img)]).expect("embedded unit")
        })
        .collect();
    let mut base = base;
    base.sort_unstable();
    quotient_by_central(&units, &base)
}

pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    let size = (a.order() as u64) * (b.order() as u64);
    if size > CONSTRUCTION_CEILING as u64 {
        return Err(too_large("product order", size));
    }
    let la = a.key(0).len();
    let mut elems = Vec::new();
    for x in 0..a.order() {
        for y in 0..b.order() {
            let mut k = a.key(x).to_vec();
            k.extend_from_slice(b.key(y));
            elems.push((k, format!("({}, {})", a.label(x), b.label(y))));
        }
    }
    FiniteGroup::from_keys(elems, |u, v| {
        let x = a.mul(a.index_of(&u[..la]).unwrap(), a.index_of(&v[..la]).unwrap());
        let y = b.mul(b.index_of(&u[la..]).unwrap(), b.index_of(&v[la..]).unwrap());
        let mut k = a.key(x).to_vec();
        k.extend_from_slice(b.key(y));
        k
    })
}
