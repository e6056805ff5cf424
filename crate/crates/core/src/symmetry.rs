//! Finite orthogonal group actions on grid fields: z ↦ z·e^{2πi/k} rotations
//! and the mirror z ↦ z̄, the averaging projector onto the fixed subspace,
//! and membership/defect tests for the symmetric classes E_{k,p} (k-fold
//! rotation invariant) and T_{k,p} (additionally mirror invariant).
//!
//! On the cell-centered grid with even N, every element whose matrix has
//! entries in {0, ±1} (all of D₄: 90° rotations, axis and diagonal mirrors)
//! acts by an exact index permutation — no interpolation, so invariance
//! identities hold to roundoff. Other angles fall back to bilinear
//! interpolation with zero extension and are flagged approximate.

use crate::constants::DEFECT_EPS;
use crate::grid::GridField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    /// Cyclic group generated by z ↦ z·e^{2πi/k} (order k).
    RotationK,
    /// Dihedral group: rotations plus the mirror z ↦ z̄ (order 2k).
    DihedralK,
}

/// One orthogonal transform g; fields transform by (g·u)(x) = u(g⁻¹x).
#[derive(Debug, Clone, Copy)]
pub struct GroupElement {
    /// The matrix of g (orthogonal, det ±1).
    pub mat: [[f64; 2]; 2],
}

/// How a coordinate of the source point g⁻¹x is read off the target indices.
#[derive(Debug, Clone, Copy)]
enum AxisMap {
    FromX { flip: bool },
    FromY { flip: bool },
}

#[derive(Debug, Clone, Copy)]
enum Action {
    Exact { sx: AxisMap, sy: AxisMap },
    Interpolated,
}

impl GroupElement {
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        GroupElement {
            mat: [[c, -s], [s, c]],
        }
    }

    /// Mirror z ↦ z̄, i.e. (x, y) ↦ (x, −y).
    pub fn mirror() -> Self {
        GroupElement {
            mat: [[1.0, 0.0], [0.0, -1.0]],
        }
    }

    pub fn compose(&self, other: &GroupElement) -> Self {
        let a = &self.mat;
        let b = &other.mat;
        let mut m = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        GroupElement { mat: m }
    }

    /// Inverse = transpose for orthogonal matrices.
    pub fn inverse(&self) -> Self {
        GroupElement {
            mat: [
                [self.mat[0][0], self.mat[1][0]],
                [self.mat[0][1], self.mat[1][1]],
            ],
        }
    }

    pub fn approx_eq(&self, other: &GroupElement, tol: f64) -> bool {
        self.mat
            .iter()
            .flatten()
            .zip(other.mat.iter().flatten())
            .all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn is_identity(&self) -> bool {
        self.approx_eq(
            &GroupElement {
                mat: [[1.0, 0.0], [0.0, 1.0]],
            },
            1e-12,
        )
    }

    fn snap(v: f64) -> Option<f64> {
        for target in [-1.0, 0.0, 1.0] {
            if (v - target).abs() < 1e-12 {
                return Some(target);
            }
        }
        None
    }

    /// Exact index-permutation action when every matrix entry is 0 or ±1.
    fn action(&self) -> Action {
        let inv = self.inverse();
        let mut rows = [None, None];
        for (i, row) in inv.mat.iter().enumerate() {
            let (a, b) = (Self::snap(row[0]), Self::snap(row[1]));
            rows[i] = match (a, b) {
                (Some(a), Some(0.0_f64)) if a != 0.0 => Some(AxisMap::FromX { flip: a < 0.0 }),
                (Some(0.0_f64), Some(b)) if b != 0.0 => Some(AxisMap::FromY { flip: b < 0.0 }),
                _ => None,
            };
        }
        match (rows[0], rows[1]) {
            (Some(sx), Some(sy)) => Action::Exact { sx, sy },
            _ => Action::Interpolated,
        }
    }

    pub fn is_exact_permutation(&self) -> bool {
        matches!(self.action(), Action::Exact { .. })
    }

    /// (g·u)(x) = u(g⁻¹x); exact index permutation where possible, bilinear
    /// interpolation with zero extension otherwise.
    pub fn apply(&self, u: &GridField) -> GridField {
        let grid = u.grid().clone();
        let n = grid.size();
        match self.action() {
            Action::Exact { sx, sy } => {
                let mut out = GridField::zeros(&grid);
                let src_index = |map: AxisMap, ix: usize, iy: usize| -> usize {
                    match map {
                        AxisMap::FromX { flip } => {
                            if flip {
                                n - 1 - ix
                            } else {
                                ix
                            }
                        }
                        AxisMap::FromY { flip } => {
                            if flip {
                                n - 1 - iy
                            } else {
                                iy
                            }
                        }
                    }
                };
                for ix in 0..n {
                    for iy in 0..n {
                        let jx = src_index(sx, ix, iy);
                        let jy = src_index(sy, ix, iy);
                        out.values_mut()[grid.idx(ix, iy)] = u.values()[grid.idx(jx, jy)];
                    }
                }
                out
            }
            Action::Interpolated => {
                let inv = self.inverse();
                let l = grid.half_width();
                let h = grid.spacing();
                let vals = u.values();
                GridField::from_fn(&grid, |x, y| {
                    let sx = inv.mat[0][0] * x + inv.mat[0][1] * y;
                    let sy = inv.mat[1][0] * x + inv.mat[1][1] * y;
                    // continuous index of the source point
                    let fx = (sx + l) / h - 0.5;
                    let fy = (sy + l) / h - 0.5;
                    let i0 = fx.floor();
                    let j0 = fy.floor();
                    let tx = fx - i0;
                    let ty = fy - j0;
                    let mut acc = 0.0;
                    for (di, wx) in [(0.0, 1.0 - tx), (1.0, tx)] {
                        for (dj, wy) in [(0.0, 1.0 - ty), (1.0, ty)] {
                            let i = i0 + di;
                            let j = j0 + dj;
                            if i >= 0.0 && j >= 0.0 && (i as usize) < n && (j as usize) < n {
                                acc += wx * wy * vals[grid.idx(i as usize, j as usize)];
                            }
                        }
                    }
                    acc
                })
            }
        }
    }
}

/// A finite subgroup of O(2): the rotation group of order k or the dihedral
/// group of order 2k (mirror included). Closure is checked on construction.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    kind: GroupKind,
    k: usize,
    elements: Vec<GroupElement>,
}

impl SymmetryGroup {
    pub fn rotation(k: usize) -> crate::Result<Self> {
        Self::build(GroupKind::RotationK, k)
    }

    pub fn dihedral(k: usize) -> crate::Result<Self> {
        Self::build(GroupKind::DihedralK, k)
    }

    fn build(kind: GroupKind, k: usize) -> crate::Result<Self> {
        if k < 2 {
            return Err(crate::CoreError::OutOfRange(format!(
                "symmetry group needs k ≥ 2, got {k}"
            )));
        }
        let mut elements = Vec::new();
        for j in 0..k {
            let theta = std::f64::consts::TAU * j as f64 / k as f64;
            elements.push(GroupElement::rotation(theta));
        }
        if kind == GroupKind::DihedralK {
            let m = GroupElement::mirror();
            for j in 0..k {
                let theta = std::f64::consts::TAU * j as f64 / k as f64;
                elements.push(m.compose(&GroupElement::rotation(theta)));
            }
        }
        let g = SymmetryGroup { kind, k, elements };
        g.check_closure()?;
        Ok(g)
    }

    fn check_closure(&self) -> crate::Result<()> {
        for a in &self.elements {
            for b in &self.elements {
                let c = a.compose(b);
                if !self.elements.iter().any(|e| e.approx_eq(&c, 1e-9)) {
                    return Err(crate::CoreError::OutOfRange(
                        "group elements are not closed under composition".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// True when every element acts by an exact index permutation on a
    /// cell-centered grid (rotation_2, rotation_4, dihedral_2, dihedral_4).
    pub fn is_exact(&self) -> bool {
        self.elements.iter().all(|g| g.is_exact_permutation())
    }

    /// The symmetry classes of the existence theory require k ≥ 4 for pure
    /// rotations, k ≥ 2 once the mirror is included.
    pub fn satisfies_symmetry_condition(&self) -> bool {
        match self.kind {
            GroupKind::RotationK => self.k >= 4,
            GroupKind::DihedralK => self.k >= 2,
        }
    }

    /// Averaging projector onto the fixed subspace:
    /// (Pu)(x) = (1/#G) Σ_{g∈G} u(g⁻¹x).
    pub fn average(&self, u: &GridField) -> GridField {
        let mut acc = GridField::zeros(u.grid());
        for g in &self.elements {
            let gu = g.apply(u);
            acc.axpy(1.0, &gu).expect("same grid by construction");
        }
        acc.scale(1.0 / self.elements.len() as f64);
        acc
    }

    /// max over g of ‖g·u − u‖₂ / max(‖u‖₂, ε): zero (to roundoff) exactly
    /// when u is G-invariant.
    pub fn defect(&self, u: &GridField) -> f64 {
        let base = u.norm_l2().max(DEFECT_EPS);
        let mut worst: f64 = 0.0;
        for g in &self.elements {
            if g.is_identity() {
                continue;
            }
            let mut gu = g.apply(u);
            gu.axpy(-1.0, u).expect("same grid");
            worst = worst.max(gu.norm_l2() / base);
        }
        worst
    }
}
