//! Split octonions as Zorn vector matrices, the three-form θ, derivations
//! (g2'), and the two orbits of isotropic 3-planes in Im O'.

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactalg::matrix::{coordinates, in_span, same_span, span_basis, span_dim, Matrix};
use crate::exactalg::scalar::{fmt_scalar, frac, half, int, random_scalar};
use crate::exactalg::Scalar;
use crate::report::CheckReport;

type V3 = [Scalar; 3];

fn dot(a: &V3, b: &V3) -> Scalar {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn cross(a: &V3, b: &V3) -> V3 {
    [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

fn vadd(a: &V3, b: &V3) -> V3 {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

fn vscale(s: &Scalar, a: &V3) -> V3 {
    [s * &a[0], s * &a[1], s * &a[2]]
}

fn vzero() -> V3 {
    [Scalar::zero(), Scalar::zero(), Scalar::zero()]
}

fn e(i: usize) -> V3 {
    let mut v = vzero();
    v[i] = Scalar::one();
    v
}

/// Zorn vector matrix (a, v; w, b).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZornOct {
    pub a: Scalar,
    pub v: V3,
    pub w: V3,
    pub b: Scalar,
}

impl ZornOct {
    pub fn new(a: Scalar, v: V3, w: V3, b: Scalar) -> Self {
        ZornOct { a, v, w, b }
    }

    pub fn zero() -> Self {
        Self::new(Scalar::zero(), vzero(), vzero(), Scalar::zero())
    }

    pub fn one() -> Self {
        Self::new(Scalar::one(), vzero(), vzero(), Scalar::one())
    }

    /// (0, e_i; 0, 0)
    pub fn ev(i: usize) -> Self {
        Self::new(Scalar::zero(), e(i), vzero(), Scalar::zero())
    }

    /// (0, 0; e_i, 0)
    pub fn ew(i: usize) -> Self {
        Self::new(Scalar::zero(), vzero(), e(i), Scalar::zero())
    }

    /// (1, 0; 0, -1)
    pub fn h() -> Self {
        Self::new(Scalar::one(), vzero(), vzero(), -Scalar::one())
    }

    /// Coordinates (a, v1, v2, v3, w1, w2, w3, b).
    pub fn coords(&self) -> Vec<Scalar> {
        let mut c = vec![self.a.clone()];
        c.extend(self.v.iter().cloned());
        c.extend(self.w.iter().cloned());
        c.push(self.b.clone());
        c
    }

    pub fn from_coords(c: &[Scalar]) -> Self {
        assert_eq!(c.len(), 8);
        Self::new(
            c[0].clone(),
            [c[1].clone(), c[2].clone(), c[3].clone()],
            [c[4].clone(), c[5].clone(), c[6].clone()],
            c[7].clone(),
        )
    }

    /// Basis of O' in coordinate order.
    pub fn basis() -> Vec<ZornOct> {
        (0..8)
            .map(|i| {
                let mut c = vec![Scalar::zero(); 8];
                c[i] = Scalar::one();
                Self::from_coords(&c)
            })
            .collect()
    }

    /// Coordinates on Im O': (a, v, w), with b = -a.
    pub fn im_coords(&self) -> Vec<Scalar> {
        self.coords()[..7].to_vec()
    }

    pub fn from_im(c: &[Scalar]) -> Self {
        assert_eq!(c.len(), 7);
        let mut full = c.to_vec();
        full.push(-c[0].clone());
        Self::from_coords(&full)
    }

    /// Basis h, (0,e_i;0,0), (0,0;e_i,0) of Im O'.
    pub fn im_basis() -> Vec<ZornOct> {
        (0..7)
            .map(|i| {
                let mut c = vec![Scalar::zero(); 7];
                c[i] = Scalar::one();
                Self::from_im(&c)
            })
            .collect()
    }

    /// (a,v;w,b)(a',v';w',b') = (aa' + v·w', av' + b'v + w×w'; a'w + bw' - v×v', bb' + v'·w)
    pub fn mul(&self, o: &ZornOct) -> ZornOct {
        ZornOct {
            a: &self.a * &o.a + dot(&self.v, &o.w),
            v: vadd(&vadd(&vscale(&self.a, &o.v), &vscale(&o.b, &self.v)), &cross(&self.w, &o.w)),
            w: vadd(&vadd(&vscale(&o.a, &self.w), &vscale(&self.b, &o.w)), &vscale(&-Scalar::one(), &cross(&self.v, &o.v))),
            b: &self.b * &o.b + dot(&o.v, &self.w),
        }
    }

    pub fn add(&self, o: &ZornOct) -> ZornOct {
        ZornOct { a: &self.a + &o.a, v: vadd(&self.v, &o.v), w: vadd(&self.w, &o.w), b: &self.b + &o.b }
    }

    pub fn scale(&self, s: &Scalar) -> ZornOct {
        ZornOct { a: s * &self.a, v: vscale(s, &self.v), w: vscale(s, &self.w), b: s * &self.b }
    }

    pub fn sub(&self, o: &ZornOct) -> ZornOct {
        self.add(&o.scale(&-Scalar::one()))
    }

    pub fn conj(&self) -> ZornOct {
        let m = -Scalar::one();
        ZornOct { a: self.b.clone(), v: vscale(&m, &self.v), w: vscale(&m, &self.w), b: self.a.clone() }
    }

    /// N(x,x) = ab - v·w
    pub fn norm(&self) -> Scalar {
        &self.a * &self.b - dot(&self.v, &self.w)
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|x| x.is_zero())
    }

    pub fn is_imaginary(&self) -> bool {
        (&self.a + &self.b).is_zero()
    }

    pub fn commutator(&self, o: &ZornOct) -> ZornOct {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let c: Vec<Scalar> = (0..8).map(|_| random_scalar(rng, 6, 4)).collect();
        Self::from_coords(&c)
    }

    pub fn random_imaginary<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let c: Vec<Scalar> = (0..7).map(|_| random_scalar(rng, 6, 4)).collect();
        Self::from_im(&c)
    }
}

/// Polarization N(x,y) = ½(ab' + a'b - v·w' - v'·w).
pub fn polar(x: &ZornOct, y: &ZornOct) -> Scalar {
    (&x.a * &y.b + &y.a * &x.b - dot(&x.v, &y.w) - dot(&y.v, &x.w)) * half()
}

pub fn zorn_mul(x: &ZornOct, y: &ZornOct) -> ZornOct {
    x.mul(y)
}

/// [x,y,z] = (xy)z - x(yz)
pub fn alternator(x: &ZornOct, y: &ZornOct, z: &ZornOct) -> ZornOct {
    x.mul(y).mul(z).sub(&x.mul(&y.mul(z)))
}

/// θ(x,y,z) = N(xy, z) on imaginary octonions.
pub fn theta(x: &ZornOct, y: &ZornOct, z: &ZornOct) -> Result<Scalar> {
    if !(x.is_imaginary() && y.is_imaginary() && z.is_imaginary()) {
        return Err(Error::NotImaginary);
    }
    Ok(polar(&x.mul(y), z))
}

/// θ as N(½[x,y], z).
pub fn theta_commutator(x: &ZornOct, y: &ZornOct, z: &ZornOct) -> Result<Scalar> {
    if !(x.is_imaginary() && y.is_imaginary() && z.is_imaginary()) {
        return Err(Error::NotImaginary);
    }
    Ok(polar(&x.commutator(y).scale(&half()), z))
}

/// Gram matrix of N on Im O' in the basis `ZornOct::im_basis`.
pub fn im_gram() -> Matrix {
    let b = ZornOct::im_basis();
    Matrix::from_fn(7, 7, |i, j| polar(&b[i], &b[j]))
}

/// Span of linearly independent imaginary octonions.
#[derive(Clone, Debug)]
pub struct ImSubspace {
    pub basis: Vec<ZornOct>,
    pub gram: Matrix,
}

impl ImSubspace {
    pub fn new(vectors: &[ZornOct]) -> Result<Self> {
        if vectors.iter().any(|x| !x.is_imaginary()) {
            return Err(Error::NotImaginary);
        }
        let rows: Vec<Vec<Scalar>> = vectors.iter().map(|x| x.im_coords()).collect();
        let basis: Vec<ZornOct> = span_basis(&rows, 7).iter().map(|c| ZornOct::from_im(c)).collect();
        let gram = Matrix::from_fn(basis.len(), basis.len(), |i, j| polar(&basis[i], &basis[j]));
        Ok(ImSubspace { basis, gram })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_isotropic(&self) -> bool {
        self.gram.is_zero()
    }

    pub fn contains(&self, x: &ZornOct) -> bool {
        let rows: Vec<Vec<Scalar>> = self.basis.iter().map(|b| b.im_coords()).collect();
        x.is_imaginary() && in_span(&rows, &x.im_coords(), 7)
    }

    pub fn same_as(&self, other: &ImSubspace) -> bool {
        let a: Vec<Vec<Scalar>> = self.basis.iter().map(|b| b.im_coords()).collect();
        let b: Vec<Vec<Scalar>> = other.basis.iter().map(|b| b.im_coords()).collect();
        same_span(&a, &b, 7)
    }

    fn check_plane(&self) -> Result<()> {
        if self.dim() != 3 {
            return Err(Error::WrongDimension { expected: 3, got: self.dim() });
        }
        if !self.is_isotropic() {
            return Err(Error::SubspaceNotIsotropic);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orbit {
    Open,
    Closed,
}

/// Open iff θ does not vanish on B. Closed planes are also checked to satisfy
/// 0 ≠ B·B ⊆ B.
pub fn classify_plane(b: &ImSubspace) -> Result<Orbit> {
    b.check_plane()?;
    let t = theta(&b.basis[0], &b.basis[1], &b.basis[2])?;
    if !t.is_zero() {
        return Ok(Orbit::Open);
    }
    let mut nonzero = false;
    for x in &b.basis {
        for y in &b.basis {
            let p = x.mul(y);
            if !p.is_zero() {
                nonzero = true;
            }
            if !b.contains(&p) {
                return Err(Error::Degenerate("closed plane with B·B not in B".into()));
            }
        }
    }
    if !nonzero {
        return Err(Error::Degenerate("closed plane with B·B = 0".into()));
    }
    Ok(Orbit::Closed)
}

/// {u ∈ Im O' : uz = zu = 0} for a nonzero isotropic imaginary z.
pub fn two_sided_kernel(z: &ZornOct) -> Result<ImSubspace> {
    if !z.is_imaginary() {
        return Err(Error::NotImaginary);
    }
    if z.is_zero() || !z.norm().is_zero() {
        return Err(Error::NotIsotropic);
    }
    let ib = ZornOct::im_basis();
    let mut rows = Vec::new();
    for r in 0..8 {
        rows.push(ib.iter().map(|u| u.mul(z).coords()[r].clone()).collect::<Vec<_>>());
        rows.push(ib.iter().map(|u| z.mul(u).coords()[r].clone()).collect::<Vec<_>>());
    }
    let ker = Matrix::from_rows(&rows).kernel();
    let vecs: Vec<ZornOct> = ker.iter().map(|c| ZornOct::from_im(c)).collect();
    let sub = ImSubspace::new(&vecs)?;
    if !sub.is_isotropic() {
        return Err(Error::SubspaceNotIsotropic);
    }
    Ok(sub)
}

/// Structure constants m[i][j] = coordinates of e_i e_j.
fn mult_table() -> Vec<Vec<Vec<Scalar>>> {
    let b = ZornOct::basis();
    b.iter().map(|x| b.iter().map(|y| x.mul(y).coords()).collect()).collect()
}

/// Basis of the derivation algebra as 8×8 matrices acting on coordinates.
pub fn derivation_algebra() -> Vec<Matrix> {
    let m = mult_table();
    // unknown D[k][l] at index 8k + l
    let mut rows = Vec::new();
    for i in 0..8 {
        for j in 0..8 {
            for r in 0..8 {
                let mut row = vec![Scalar::zero(); 64];
                for l in 0..8 {
                    row[8 * r + l] += &m[i][j][l];
                }
                for k in 0..8 {
                    row[8 * k + i] -= &m[k][j][r];
                    row[8 * k + j] -= &m[i][k][r];
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    Matrix::from_rows(&rows).kernel().into_iter().map(|v| Matrix::from_flat(8, 8, v)).collect()
}

/// Restriction of an 8×8 derivation to Im O' in the basis `im_basis`.
pub fn restrict_to_im(d: &Matrix) -> Matrix {
    let ib = ZornOct::im_basis();
    let cols: Vec<Vec<Scalar>> = ib.iter().map(|u| ZornOct::from_coords(&d.mul_vec(&u.coords())).im_coords()).collect();
    Matrix::from_cols(&cols, 7)
}

fn apply(d: &Matrix, x: &ZornOct) -> ZornOct {
    ZornOct::from_coords(&d.mul_vec(&x.coords()))
}

/// Derivations preserving B.
pub fn stabilizer_in_g2(b: &ImSubspace) -> Result<Vec<Matrix>> {
    b.check_plane()?;
    let der = derivation_algebra();
    let brows: Vec<Vec<Scalar>> = b.basis.iter().map(|x| x.coords()).collect();
    let ann = Matrix::from_rows(&brows).kernel();
    let mut rows = Vec::new();
    for x in &b.basis {
        for phi in &ann {
            rows.push(
                der.iter()
                    .map(|d| {
                        let y = apply(d, x).coords();
                        phi.iter().zip(&y).map(|(p, q)| p * q).sum::<Scalar>()
                    })
                    .collect::<Vec<_>>(),
            );
        }
    }
    let ker = Matrix::from_rows(&rows).kernel();
    Ok(ker
        .iter()
        .map(|c| {
            let mut m = Matrix::zeros(8, 8);
            for (ci, d) in c.iter().zip(&der) {
                if !ci.is_zero() {
                    m = m.add(&d.scale(ci));
                }
            }
            m
        })
        .collect())
}

/// Killing form tr(ad x ad y) of the subalgebra spanned by `basis`.
pub fn killing_form(basis: &[Matrix]) -> Matrix {
    let flat: Vec<Vec<Scalar>> = basis.iter().map(|m| m.flatten()).collect();
    let len = flat[0].len();
    let d = basis.len();
    let ad: Vec<Matrix> = basis
        .iter()
        .map(|x| {
            let cols: Vec<Vec<Scalar>> = basis
                .iter()
                .map(|y| coordinates(&flat, &x.commutator(y).flatten(), len).expect("subalgebra is closed"))
                .collect();
            Matrix::from_cols(&cols, d)
        })
        .collect();
    Matrix::from_fn(d, d, |i, j| ad[i].trace_product(&ad[j]))
}

const TABLE_LABELS: [&str; 7] = ["a", "x", "y", "z", "yz", "zx", "xy"];
const COEF_LABELS: [&str; 8] = ["1", "a", "x", "y", "z", "yz", "zx", "xy"];

/// Multiplication table of F = {a, x, y, z, yz, zx, xy}, entries as
/// coefficient vectors over {1, a, x, y, z, yz, zx, xy}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleTable {
    pub entries: Vec<Vec<Vec<Scalar>>>,
}

fn fmt_combo(c: &[Scalar]) -> String {
    let mut parts = Vec::new();
    for (x, l) in c.iter().zip(COEF_LABELS) {
        if x.is_zero() {
            continue;
        }
        let s = if l == "1" {
            fmt_scalar(x)
        } else if x.is_one() {
            l.to_string()
        } else if *x == -Scalar::one() {
            format!("-{l}")
        } else {
            format!("{}{l}", fmt_scalar(x))
        };
        parts.push(s);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl TripleTable {
    pub fn labels() -> [&'static str; 7] {
        TABLE_LABELS
    }

    pub fn entry_string(&self, i: usize, j: usize) -> String {
        fmt_combo(&self.entries[i][j])
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..7).map(|i| (0..7).map(|j| self.entry_string(i, j)).collect()).collect()
    }

    /// Entries where the tables differ: (row label, column label, self, other).
    pub fn mismatches(&self, other: &TripleTable) -> Vec<(String, String, String, String)> {
        let mut out = Vec::new();
        for i in 0..7 {
            for j in 0..7 {
                if self.entries[i][j] != other.entries[i][j] {
                    out.push((
                        TABLE_LABELS[i].into(),
                        TABLE_LABELS[j].into(),
                        self.entry_string(i, j),
                        other.entry_string(i, j),
                    ));
                }
            }
        }
        out
    }

    /// The same table with the unit 1 replaced by -1 in every entry.
    pub fn unit_sign_flipped(&self) -> TripleTable {
        let mut t = self.clone();
        for row in t.entries.iter_mut() {
            for c in row.iter_mut() {
                c[0] = -c[0].clone();
            }
        }
        t
    }
}

/// Parse one printed entry: "0", an optional sign and a label, or h(1±a) for ½(1±a).
fn parse_entry(s: &str) -> Vec<Scalar> {
    let mut c = vec![Scalar::zero(); 8];
    match s {
        "0" => {}
        "h(1-a)" => {
            c[0] = half();
            c[1] = -half();
        }
        "h(1+a)" => {
            c[0] = half();
            c[1] = half();
        }
        _ => {
            let (sign, label) = match s.strip_prefix('-') {
                Some(rest) => (-Scalar::one(), rest),
                None => (Scalar::one(), s),
            };
            let idx = COEF_LABELS.iter().position(|&l| l == label).expect("known label");
            c[idx] = sign;
        }
    }
    c
}

/// The printed multiplication table for F, verbatim.
pub fn printed_table() -> TripleTable {
    let rows: [[&str; 7]; 7] = [
        ["-1", "x", "y", "z", "-yz", "-zx", "-xy"],
        ["-x", "0", "xy", "-zx", "h(1-a)", "0", "0"],
        ["-y", "-xy", "0", "yz", "0", "h(1-a)", "0"],
        ["-z", "zx", "-yz", "0", "0", "0", "h(1-a)"],
        ["yz", "h(1+a)", "0", "0", "0", "z", "-y"],
        ["zx", "0", "h(1+a)", "0", "-z", "0", "x"],
        ["xy", "0", "0", "h(1+a)", "y", "-x", "0"],
    ];
    TripleTable { entries: rows.iter().map(|r| r.iter().map(|s| parse_entry(s)).collect()).collect() }
}

/// The elements a = [xy, z], x, y, z, yz, zx, xy of an octonionic triple.
pub fn triple_elements(x: &ZornOct, y: &ZornOct, z: &ZornOct) -> Vec<ZornOct> {
    let xy = x.mul(y);
    let a = xy.commutator(z);
    vec![a, x.clone(), y.clone(), z.clone(), y.mul(z), z.mul(x), xy]
}

pub fn triple_table(x: &ZornOct, y: &ZornOct, z: &ZornOct) -> Result<TripleTable> {
    let plane = ImSubspace::new(&[x.clone(), y.clone(), z.clone()])?;
    plane.check_plane()?;
    let t = theta(x, y, z)?;
    if t != half() {
        return Err(Error::ThetaNotHalf(fmt_scalar(&t)));
    }
    let f = triple_elements(x, y, z);
    let mut basis = vec![ZornOct::one().coords()];
    basis.extend(f.iter().map(|u| u.coords()));
    if span_dim(&basis, 8) != 8 {
        return Err(Error::Degenerate("F ∪ {1} is not a basis".into()));
    }
    let entries = f
        .iter()
        .map(|p| f.iter().map(|q| coordinates(&basis, &p.mul(q).coords(), 8).expect("basis")).collect())
        .collect();
    Ok(TripleTable { entries })
}

/// Rescale a basis of an open plane to an octonionic triple (θ = ½).
pub fn octonionic_triple(b: &ImSubspace) -> Result<(ZornOct, ZornOct, ZornOct)> {
    b.check_plane()?;
    let t = theta(&b.basis[0], &b.basis[1], &b.basis[2])?;
    if t.is_zero() {
        return Err(Error::Degenerate("theta vanishes on the plane".into()));
    }
    let z = b.basis[2].scale(&(Scalar::one() / (t * int(2))));
    Ok((b.basis[0].clone(), b.basis[1].clone(), z))
}

/// span{(0,e_i;0,0)}: an open-orbit plane with θ(e1,e2,e3) = ½.
pub fn reference_open_plane() -> ImSubspace {
    ImSubspace::new(&[ZornOct::ev(0), ZornOct::ev(1), ZornOct::ev(2)]).unwrap()
}

/// span{(0,e1;0,0), (0,0;e2,0), (0,0;e3,0)}: the closed-orbit plane.
pub fn reference_closed_plane() -> ImSubspace {
    ImSubspace::new(&[ZornOct::ev(0), ZornOct::ew(1), ZornOct::ew(2)]).unwrap()
}

/// Random element of SO(N|Im O') as a Cayley transform (I - X)^-1 (I + X)
/// with X in so(3,4).
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R) -> Matrix {
    let g = im_gram();
    let ginv = g.inverse().unwrap();
    loop {
        let mut s = Matrix::zeros(7, 7);
        for i in 0..7 {
            for j in i + 1..7 {
                let v = random_scalar(rng, 3, 2);
                s[(i, j)] = v.clone();
                s[(j, i)] = -v;
            }
        }
        let x = ginv.mul(&s);
        let id = Matrix::identity(7);
        if let Some(inv) = id.sub(&x).inverse() {
            return inv.mul(&id.add(&x));
        }
    }
}

fn apply_im(q: &Matrix, x: &ZornOct) -> ZornOct {
    ZornOct::from_im(&q.mul_vec(&x.im_coords()))
}

pub fn random_open_plane<R: Rng + ?Sized>(rng: &mut R) -> ImSubspace {
    loop {
        let q = random_isometry(rng);
        let b: Vec<ZornOct> = reference_open_plane().basis.iter().map(|x| apply_im(&q, x)).collect();
        let p = ImSubspace::new(&b).unwrap();
        if classify_plane(&p) == Ok(Orbit::Open) {
            return p;
        }
    }
}

pub fn random_closed_plane<R: Rng + ?Sized>(rng: &mut R) -> ImSubspace {
    let q = random_isometry(rng);
    let z = apply_im(&q, &ZornOct::ev(0));
    two_sided_kernel(&z).expect("image of a null vector is null")
}

/// Criterion: table from a random open plane equals the printed table.
pub fn table_check<R: Rng + ?Sized>(rng: &mut R) -> CheckReport {
    let plane = random_open_plane(rng);
    let (x, y, z) = octonionic_triple(&plane).unwrap();
    let computed = triple_table(&x, &y, &z).unwrap();
    let printed = printed_table();
    let mism = printed.mismatches(&computed);
    let flipped = printed.unit_sign_flipped().mismatches(&computed);
    let a = &triple_elements(&x, &y, &z)[0];
    CheckReport::new(
        "octonion.table",
        "multiplication table of an octonionic triple equals the printed table",
        mism.is_empty(),
        json!({
            "computed": computed.to_strings(),
            "mismatches": mism.iter().map(|(r, c, p, q)| json!({"row": r, "col": c, "printed": p, "computed": q})).collect::<Vec<_>>(),
            "mismatches_after_unit_sign_flip": flipped.len(),
            "a_squared": fmt_combo(&coordinates(&{
                let mut b = vec![ZornOct::one().coords()];
                b.extend(triple_elements(&x, &y, &z).iter().map(|u| u.coords()));
                b
            }, &a.mul(a).coords(), 8).unwrap()),
            "norm_a": fmt_scalar(&a.norm()),
        }),
    )
}

pub fn derivation_check() -> CheckReport {
    let der = derivation_algebra();
    let one = ZornOct::one();
    let kills_one = der.iter().all(|d| apply(d, &one).is_zero());
    let ib = ZornOct::im_basis();
    let preserves_im = der.iter().all(|d| ib.iter().all(|u| apply(d, u).is_imaginary()));
    let skew = der.iter().all(|d| {
        ZornOct::basis().iter().all(|x| ZornOct::basis().iter().all(|y| (polar(&apply(d, x), y) + polar(x, &apply(d, y))).is_zero()))
    });
    let kills_theta = der.iter().all(|d| {
        ib.iter().all(|x| {
            ib.iter().all(|y| {
                ib.iter().all(|z| {
                    let s = theta(&apply(d, x), y, z).unwrap() + theta(x, &apply(d, y), z).unwrap() + theta(x, y, &apply(d, z)).unwrap();
                    s.is_zero()
                })
            })
        })
    });
    CheckReport::new(
        "octonion.derivations",
        "the derivation algebra of O' has dimension 14",
        der.len() == 14 && kills_one && preserves_im && skew && kills_theta,
        json!({ "dim": der.len(), "kills_unit": kills_one, "preserves_im": preserves_im, "skew_for_N": skew, "annihilates_theta": kills_theta }),
    )
}

/// Stabilizer dimensions over random planes of each orbit.
pub fn stabilizer_check<R: Rng + ?Sized>(rng: &mut R, planes: usize) -> CheckReport {
    let mut open_dims = Vec::new();
    let mut open_semisimple = true;
    let mut closed_dims = Vec::new();
    let mut closed_degenerate = true;
    for _ in 0..planes {
        let p = random_open_plane(rng);
        let s = stabilizer_in_g2(&p).unwrap();
        if s.len() == 8 {
            open_semisimple &= killing_form(&s).rank() == 8;
        }
        open_dims.push(s.len());
        let c = random_closed_plane(rng);
        let cls = classify_plane(&c);
        let s = stabilizer_in_g2(&c).unwrap();
        if s.len() == 9 {
            closed_degenerate &= killing_form(&s).rank() < 9;
        }
        closed_dims.push(if cls == Ok(Orbit::Closed) { s.len() } else { 0 });
    }
    let ok = open_dims.iter().all(|&d| d == 8) && closed_dims.iter().all(|&d| d == 9) && open_semisimple && closed_degenerate;
    CheckReport::new(
        "octonion.stabilizers",
        "isotropic 3-plane stabilizers in g2' have dimension 8 (open orbit, sl(3)) and 9 (closed orbit)",
        ok,
        json!({ "planes": planes, "open_dims": open_dims, "closed_dims": closed_dims, "open_semisimple": open_semisimple, "closed_killing_degenerate": closed_degenerate }),
    )
}

/// ½(z(yx) - (xy)z) as an octonion, which equals θ(x,y,z)·1 for x, y, z in an
/// isotropic plane.
pub fn theta_scalar_identity(x: &ZornOct, y: &ZornOct, z: &ZornOct) -> ZornOct {
    z.mul(&y.mul(x)).sub(&x.mul(y).mul(z)).scale(&frac(1, 2))
}

/// N(xy) = N(x)N(y) on random triples.
pub fn norm_multiplicativity_check<R: Rng + ?Sized>(rng: &mut R, trials: usize) -> CheckReport {
    let mut bad = 0;
    for _ in 0..trials {
        let (x, y) = (ZornOct::random(rng), ZornOct::random(rng));
        if x.mul(&y).norm() != x.norm() * y.norm() {
            bad += 1;
        }
    }
    CheckReport::new(
        "octonion.norm_multiplicative",
        "the split octonion norm is multiplicative",
        bad == 0,
        json!({ "trials": trials, "failures": bad }),
    )
}

/// The alternator is alternating: it changes sign under every transposition and
/// vanishes when two arguments coincide.
pub fn alternator_check<R: Rng + ?Sized>(rng: &mut R, trials: usize) -> CheckReport {
    let mut bad = 0;
    let minus = -Scalar::one();
    for _ in 0..trials {
        let (x, y, z) = (ZornOct::random(rng), ZornOct::random(rng), ZornOct::random(rng));
        let a = alternator(&x, &y, &z);
        let ok = alternator(&y, &x, &z) == a.scale(&minus)
            && alternator(&x, &z, &y) == a.scale(&minus)
            && alternator(&z, &y, &x) == a.scale(&minus)
            && alternator(&x, &x, &y).is_zero()
            && alternator(&x, &y, &x).is_zero()
            && alternator(&y, &x, &x).is_zero();
        if !ok {
            bad += 1;
        }
    }
    CheckReport::new(
        "octonion.alternator",
        "the alternator (xy)z − x(yz) is antisymmetric",
        bad == 0,
        json!({ "trials": trials, "failures": bad }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_and_conjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = ZornOct::random(&mut rng);
            assert_eq!(ZornOct::one().mul(&x), x);
            assert_eq!(x.mul(&ZornOct::one()), x);
            assert_eq!(x.mul(&x.conj()), ZornOct::one().scale(&x.norm()));
        }
    }

    #[test]
    fn multiplicative_and_alternative() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let (x, y, z) = (ZornOct::random(&mut rng), ZornOct::random(&mut rng), ZornOct::random(&mut rng));
            assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
            assert!(alternator(&x, &x, &y).is_zero());
            assert_eq!(alternator(&x, &y, &z), alternator(&y, &z, &x));
            assert_eq!(alternator(&x, &y, &z), alternator(&y, &x, &z).scale(&-Scalar::one()));
        }
    }

    #[test]
    fn theta_reference() {
        let (x, y, z) = (ZornOct::ev(0), ZornOct::ev(1), ZornOct::ev(2));
        assert_eq!(theta(&x, &y, &z).unwrap(), half());
        assert!(theta(&x, &x, &z).unwrap().is_zero());
        assert_eq!(theta(&ZornOct::one(), &y, &z), Err(Error::NotImaginary));
        assert_eq!(theta_scalar_identity(&x, &y, &z), ZornOct::one().scale(&half()));
        assert_eq!(classify_plane(&reference_open_plane()), Ok(Orbit::Open));
        assert_eq!(classify_plane(&reference_closed_plane()), Ok(Orbit::Closed));
    }

    #[test]
    fn theta_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let (x, y, z) = (ZornOct::random_imaginary(&mut rng), ZornOct::random_imaginary(&mut rng), ZornOct::random_imaginary(&mut rng));
            assert_eq!(theta(&x, &y, &z).unwrap(), theta_commutator(&x, &y, &z).unwrap());
            assert_eq!(theta(&x, &y, &z).unwrap(), -theta(&y, &x, &z).unwrap());
            assert_eq!(theta(&x, &y, &z).unwrap(), theta(&y, &z, &x).unwrap());
        }
    }

    #[test]
    fn kernel_of_reference_z() {
        let k = two_sided_kernel(&ZornOct::ev(0)).unwrap();
        assert!(k.same_as(&reference_closed_plane()));
        assert!(k.contains(&ZornOct::ev(0)));
        assert_eq!(two_sided_kernel(&ZornOct::h()).unwrap_err(), Error::NotIsotropic);
    }

    #[test]
    fn isotropic_planes_anticommute() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for p in [random_open_plane(&mut rng), random_closed_plane(&mut rng)] {
            for x in &p.basis {
                assert!(x.mul(x).is_zero());
                for y in &p.basis {
                    assert!(x.mul(y).add(&y.mul(x)).is_zero());
                }
            }
        }
    }

    #[test]
    fn table_reference_triple() {
        let t = triple_table(&ZornOct::ev(0), &ZornOct::ev(1), &ZornOct::ev(2)).unwrap();
        let printed = printed_table();
        // a·x = x, x·a = -x as printed
        assert_eq!(t.entries[0][1], printed.entries[0][1]);
        assert_eq!(t.entries[1][0], printed.entries[1][0]);
        // the printed table has the unit sign flipped in exactly seven entries
        assert_eq!(printed.mismatches(&t).len(), 7);
        assert!(printed.unit_sign_flipped().mismatches(&t).is_empty());
        assert_eq!(t.entry_string(0, 0), "1");
        assert_eq!(t.entry_string(1, 4), "-1/2 - 1/2a");
    }

    #[test]
    fn derivations() {
        let r = derivation_check();
        assert!(r.passed(), "{:?}", r.payload);
        let s = stabilizer_in_g2(&reference_open_plane()).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(killing_form(&s).rank(), 8);
        let s = stabilizer_in_g2(&reference_closed_plane()).unwrap();
        assert_eq!(s.len(), 9);
        assert!(killing_form(&s).rank() < 9);
    }
}
