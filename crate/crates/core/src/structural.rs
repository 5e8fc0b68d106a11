//! Hinged panel chains as Euler–Bernoulli beams, plus the simple strength and
//! envelope checks applied to the launch configuration.
//!
//! Panels bend about their width axis (`I = w·t³/12`). A hinge is a node
//! carrying two rotation unknowns tied by a torsional spring; a rigid hinge
//! shares one. The gap between panels is split evenly between its
//! neighbours, so the hinge sits at mid-gap and each panel's mass is smeared
//! over its length plus the adjoining half-gaps.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{exp, log, sqrt};
use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::consts::STANDARD_GRAVITY;
use crate::error::{out_of_range, Error, Result};
use crate::model::{
    allowable_stress, BoundaryCondition, ChainLayout, HingeSpec, HingeStiffness, Material, PanelSpec, SatelliteModel,
};

#[derive(Debug, Clone, PartialEq)]
struct Element {
    length: f64,
    /// N·m²
    ei: f64,
    /// kg/m
    mu: f64,
    /// Distance from neutral axis to outer fibre [m].
    half_thickness: f64,
    inertia: f64,
    /// Global DOF indices `[w1, θ1, w2, θ2]`.
    dofs: [usize; 4],
}

/// Assembled finite-element model of a panel chain.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamChain {
    /// Node positions along the span [m].
    pub positions: Vec<f64>,
    /// Translational DOF of each node.
    w_dofs: Vec<usize>,
    elements: Vec<Element>,
    springs: Vec<(usize, usize, f64)>,
    constrained: Vec<usize>,
    n_dofs: usize,
    pub boundary: BoundaryCondition,
}

fn element_stiffness(e: &Element) -> [[f64; 4]; 4] {
    let l = e.length;
    let c = e.ei / (l * l * l);
    [
        [12.0 * c, 6.0 * l * c, -12.0 * c, 6.0 * l * c],
        [6.0 * l * c, 4.0 * l * l * c, -6.0 * l * c, 2.0 * l * l * c],
        [-12.0 * c, -6.0 * l * c, 12.0 * c, -6.0 * l * c],
        [6.0 * l * c, 2.0 * l * l * c, -6.0 * l * c, 4.0 * l * l * c],
    ]
}

fn element_mass(e: &Element) -> [[f64; 4]; 4] {
    let l = e.length;
    let c = e.mu * l / 420.0;
    [
        [156.0 * c, 22.0 * l * c, 54.0 * c, -13.0 * l * c],
        [22.0 * l * c, 4.0 * l * l * c, 13.0 * l * c, -3.0 * l * l * c],
        [54.0 * c, 13.0 * l * c, 156.0 * c, -22.0 * l * c],
        [-13.0 * l * c, -3.0 * l * l * c, -22.0 * l * c, 4.0 * l * l * c],
    ]
}

/// Consistent nodal loads of a uniform line load `q` [N/m].
fn element_load(e: &Element, q: f64) -> [f64; 4] {
    let l = e.length;
    [q * l / 2.0, q * l * l / 12.0, q * l / 2.0, -q * l * l / 12.0]
}

fn hinge_at(hinges: &[HingeSpec], joint: usize) -> HingeStiffness {
    hinges
        .iter()
        .find(|h| h.joint == joint)
        .map_or(HingeStiffness::Rigid, |h| h.stiffness)
}

/// Meshes `panels` end to end according to `layout`. Joints without a hinge
/// entry are rigid.
pub fn build_chain(panels: &[PanelSpec], materials: &[Material], layout: &ChainLayout) -> Result<BeamChain> {
    if panels.is_empty() {
        return Err(Error::Invalid {
            what: "panel chain",
            reason: "needs at least one panel".into(),
        });
    }
    if layout.elements_per_panel < 1 {
        return Err(out_of_range("elements per panel", layout.elements_per_panel as f64));
    }
    if !(layout.gap >= 0.0) {
        return Err(out_of_range("panel gap", layout.gap));
    }
    for h in &layout.hinges {
        if h.joint + 1 >= panels.len() {
            return Err(Error::Invalid {
                what: "hinge",
                reason: format!("joint {} does not exist in a {}-panel chain", h.joint, panels.len()),
            });
        }
        if layout.hinges.iter().filter(|o| o.joint == h.joint).count() > 1 {
            return Err(Error::Invalid {
                what: "hinge",
                reason: format!("joint {} defined twice", h.joint),
            });
        }
        if let HingeStiffness::Spring(k) = h.stiffness {
            if !(k > 0.0) {
                return Err(out_of_range("hinge stiffness", k));
            }
        }
    }

    let n_el = layout.elements_per_panel;
    let mut positions = vec![0.0];
    let mut w_dofs = vec![0];
    let mut elements = Vec::new();
    let mut springs = Vec::new();
    let mut next = 2; // w0, θ0
    let mut theta = 1; // rotation DOF at the current node, right-hand side
    let mut x = 0.0;

    for (i, p) in panels.iter().enumerate() {
        if !(p.length > 0.0 && p.width > 0.0 && p.thickness > 0.0 && p.total_mass > 0.0) {
            return Err(Error::Invalid {
                what: "panel",
                reason: format!("`{}` needs positive length, width, thickness and mass", p.name),
            });
        }
        let mat = materials
            .iter()
            .find(|m| m.name == p.material)
            .ok_or_else(|| Error::UnknownReference {
                kind: "material",
                name: p.material.clone(),
            })?;
        let half_gaps = [i > 0, i + 1 < panels.len()].iter().filter(|b| **b).count() as f64;
        let span = p.length + 0.5 * layout.gap * half_gaps;
        let inertia = p.width * p.thickness * p.thickness * p.thickness / 12.0;
        let le = span / n_el as f64;
        for _ in 0..n_el {
            let (w2, t2) = (next, next + 1);
            next += 2;
            elements.push(Element {
                length: le,
                ei: mat.youngs_modulus * inertia,
                mu: p.total_mass / span,
                half_thickness: 0.5 * p.thickness,
                inertia,
                dofs: [*w_dofs.last().unwrap_or(&0), theta, w2, t2],
            });
            x += le;
            positions.push(x);
            w_dofs.push(w2);
            theta = t2;
        }
        if i + 1 < panels.len() {
            if let HingeStiffness::Spring(k) = hinge_at(&layout.hinges, i) {
                springs.push((theta, next, k));
                theta = next;
                next += 1;
            }
        }
    }

    let last_w = *w_dofs.last().unwrap_or(&0);
    let constrained = match layout.boundary {
        BoundaryCondition::ClampedFree => vec![0, 1],
        BoundaryCondition::PinnedPinned => vec![0, last_w],
        BoundaryCondition::ClampedEnds => vec![0, 1, last_w, theta],
        BoundaryCondition::Free => Vec::new(),
    };
    Ok(BeamChain {
        positions,
        w_dofs,
        elements,
        springs,
        constrained,
        n_dofs: next,
        boundary: layout.boundary,
    })
}

impl BeamChain {
    pub fn from_model(model: &SatelliteModel) -> Result<Self> {
        build_chain(&model.panels, &model.materials, &model.chain)
    }

    pub fn span(&self) -> f64 {
        self.positions.last().copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.elements.iter().map(|e| e.mu * e.length).sum()
    }

    pub fn dof_count(&self) -> usize {
        self.n_dofs
    }

    fn free_dofs(&self) -> Vec<usize> {
        (0..self.n_dofs).filter(|d| !self.constrained.contains(d)).collect()
    }

    fn assemble(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.n_dofs;
        let mut k = DMatrix::zeros(n, n);
        let mut m = DMatrix::zeros(n, n);
        for e in &self.elements {
            let (ke, me) = (element_stiffness(e), element_mass(e));
            for a in 0..4 {
                for b in 0..4 {
                    k[(e.dofs[a], e.dofs[b])] += ke[a][b];
                    m[(e.dofs[a], e.dofs[b])] += me[a][b];
                }
            }
        }
        for &(i, j, s) in &self.springs {
            k[(i, i)] += s;
            k[(j, j)] += s;
            k[(i, j)] -= s;
            k[(j, i)] -= s;
        }
        (k, m)
    }

    fn reduce(&self, full: &DMatrix<f64>, free: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(free.len(), free.len(), |i, j| full[(free[i], free[j])])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModalResult {
    /// Elastic natural frequencies, ascending [Hz].
    pub frequencies: Vec<f64>,
    /// Zero-frequency modes of an under-constrained chain.
    pub rigid_modes: usize,
    /// Node positions [m] matching each shape.
    pub positions: Vec<f64>,
    /// Out-of-plane displacement of every node per elastic mode, scaled to a
    /// unit peak with a positive largest entry.
    pub shapes: Vec<Vec<f64>>,
}

/// Rigid-body modes admitted by the supports. Hinge springs are strictly
/// positive, so only the chain as a whole can move rigidly: translation and
/// rotation when free, nothing once any support is applied. Counting this
/// kinematically keeps very soft hinge modes, whose eigenvalues can sit many
/// decades below the mesh's largest, from being mistaken for rigid motion.
fn rigid_mode_count(boundary: BoundaryCondition) -> usize {
    match boundary {
        BoundaryCondition::Free => 2,
        BoundaryCondition::ClampedFree | BoundaryCondition::PinnedPinned | BoundaryCondition::ClampedEnds => 0,
    }
}

/// First `n` elastic modes of the generalized problem `K·φ = ω²·M·φ`.
pub fn modal_frequencies(chain: &BeamChain, n: usize) -> Result<ModalResult> {
    let free = chain.free_dofs();
    let (k, m) = chain.assemble();
    let (k, m) = (chain.reduce(&k, &free), chain.reduce(&m, &free));
    let chol = Cholesky::new(m).ok_or(Error::Singular("mass matrix is not positive definite"))?;
    let l = chol.l();
    // A = L⁻¹·K·L⁻ᵀ
    let linv_k = l.solve_lower_triangular(&k).ok_or(Error::Singular("mass factor"))?;
    let a = l
        .solve_lower_triangular(&linv_k.transpose())
        .ok_or(Error::Singular("mass factor"))?;
    let a = 0.5 * (&a + a.transpose());
    let eig = SymmetricEigen::new(a);

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let rigid_modes = rigid_mode_count(chain.boundary);

    let lt = l.transpose();
    let mut frequencies = Vec::new();
    let mut shapes = Vec::new();
    for &i in order.iter().skip(rigid_modes).take(n) {
        frequencies.push(sqrt(eig.eigenvalues[i].max(0.0)) / (2.0 * PI));
        let y = eig.eigenvectors.column(i).into_owned();
        let v = lt.solve_upper_triangular(&y).ok_or(Error::Singular("mass factor"))?;
        let mut full = vec![0.0; chain.n_dofs];
        for (r, &d) in free.iter().enumerate() {
            full[d] = v[r];
        }
        let mut shape: Vec<f64> = chain.w_dofs.iter().map(|&d| full[d]).collect();
        let peak = shape
            .iter()
            .copied()
            .fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
        if peak != 0.0 {
            shape.iter_mut().for_each(|s| *s /= peak);
        }
        shapes.push(shape);
    }
    Ok(ModalResult {
        frequencies,
        rigid_modes,
        positions: chain.positions.clone(),
        shapes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaticResult {
    pub g_level: f64,
    /// Largest nodal out-of-plane deflection [m].
    pub max_deflection: f64,
    pub deflection_at: f64,
    /// Largest bending stress `M·(t/2)/I` [Pa].
    pub max_stress: f64,
    pub stress_at: f64,
    pub deflections: Vec<f64>,
}

/// Deflection and stress under the chain's own weight at `g_level` G, acting
/// normal to the panels.
pub fn static_load(chain: &BeamChain, g_level: f64) -> Result<StaticResult> {
    let free = chain.free_dofs();
    let (k, _) = chain.assemble();
    let mut f = DVector::zeros(chain.n_dofs);
    for e in &chain.elements {
        let fe = element_load(e, e.mu * STANDARD_GRAVITY * g_level);
        for a in 0..4 {
            f[e.dofs[a]] += fe[a];
        }
    }
    let kr = chain.reduce(&k, &free);
    let fr = DVector::from_fn(free.len(), |i, _| f[free[i]]);
    let chol = Cholesky::new(kr).ok_or(Error::Singular("stiffness matrix; the chain is not constrained"))?;
    let ur = chol.solve(&fr);
    let mut u = DVector::zeros(chain.n_dofs);
    for (r, &d) in free.iter().enumerate() {
        u[d] = ur[r];
    }

    let deflections: Vec<f64> = chain.w_dofs.iter().map(|&d| u[d]).collect();
    let (mut max_deflection, mut deflection_at) = (0.0, 0.0);
    for (x, w) in chain.positions.iter().zip(&deflections) {
        if w.abs() > max_deflection {
            max_deflection = w.abs();
            deflection_at = *x;
        }
    }

    let (mut max_stress, mut stress_at) = (0.0, 0.0);
    for (idx, e) in chain.elements.iter().enumerate() {
        let q = e.mu * STANDARD_GRAVITY * g_level;
        let ke = element_stiffness(e);
        let fe = element_load(e, q);
        let ue: [f64; 4] = core::array::from_fn(|a| u[e.dofs[a]]);
        let end: [f64; 4] = core::array::from_fn(|a| (0..4).map(|b| ke[a][b] * ue[b]).sum::<f64>() - fe[a]);
        // M(x) = −C₀ + P₀·x + q·x²/2 from the left end forces
        let moment = |x: f64| -end[1] + end[0] * x + 0.5 * q * x * x;
        let mut candidates = vec![0.0, e.length];
        if q != 0.0 {
            let xs = -end[0] / q;
            if xs > 0.0 && xs < e.length {
                candidates.push(xs);
            }
        }
        let x0 = chain.positions[idx];
        for xc in candidates {
            let s = moment(xc).abs() * e.half_thickness / e.inertia;
            if s > max_stress {
                max_stress = s;
                stress_at = x0 + xc;
            }
        }
    }
    Ok(StaticResult {
        g_level,
        max_deflection,
        deflection_at,
        max_stress,
        stress_at,
        deflections,
    })
}

/// Load level at which the peak bending stress reaches `allowable` [G].
pub fn allowable_acceleration(chain: &BeamChain, allowable: f64) -> Result<f64> {
    if !(allowable >= 0.0) {
        return Err(out_of_range("allowable stress", allowable));
    }
    let per_g = static_load(chain, 1.0)?.max_stress;
    allowable_from_stress_per_g(per_g, allowable)
}

/// `allowable / stress_per_g` [G].
pub fn allowable_from_stress_per_g(stress_per_g: f64, allowable: f64) -> Result<f64> {
    if !(stress_per_g > 0.0) {
        return Err(Error::ZeroStress);
    }
    Ok(allowable / stress_per_g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RailCheck {
    /// Pa
    pub stress: f64,
    /// Pa
    pub allowable: f64,
    pub pass: bool,
}

/// Axial compressive stress `F/A` in a rail against the working stress limit.
pub fn rail_load_check(force: f64, section_area: f64, material: &Material, factor: f64) -> Result<RailCheck> {
    if !(section_area > 0.0) {
        return Err(out_of_range("rail section area", section_area));
    }
    let allowable = allowable_stress(material, factor)?;
    let stress = force.abs() / section_area;
    Ok(RailCheck {
        stress,
        allowable,
        pass: stress <= allowable,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeCheck {
    /// Deflection plus stack offset [m].
    pub excursion: f64,
    pub limit: f64,
    pub pass: bool,
}

/// Passes when deflection plus offset stays strictly inside the envelope.
pub fn envelope_check(deflection: f64, offset: f64, limit: f64) -> Result<EnvelopeCheck> {
    if !(limit > 0.0) {
        return Err(out_of_range("envelope limit", limit));
    }
    let excursion = deflection.abs() + offset;
    Ok(EnvelopeCheck {
        excursion,
        limit,
        pass: excursion < limit,
    })
}

/// Result of [`fit_hinge_stiffness`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HingeFit {
    /// N·m/rad
    pub stiffness: f64,
    /// Hz
    pub frequency: f64,
    pub iterations: usize,
}

/// Torsional stiffness, applied to every joint, that puts the chain's first
/// elastic frequency on `target_hz`. Bisects in `log k` within `[k_lo, k_hi]`.
pub fn fit_hinge_stiffness(
    panels: &[PanelSpec],
    materials: &[Material],
    layout: &ChainLayout,
    target_hz: f64,
    k_lo: f64,
    k_hi: f64,
) -> Result<HingeFit> {
    if !(k_lo > 0.0 && k_hi > k_lo) {
        return Err(Error::Invalid {
            what: "stiffness bracket",
            reason: format!("need 0 < k_lo < k_hi (got {k_lo}, {k_hi})"),
        });
    }
    let first = |k: f64| -> Result<f64> {
        let mut l = layout.clone();
        l.hinges = (0..panels.len().saturating_sub(1))
            .map(|joint| HingeSpec {
                joint,
                stiffness: HingeStiffness::Spring(k),
            })
            .collect();
        let chain = build_chain(panels, materials, &l)?;
        modal_frequencies(&chain, 1)?
            .frequencies
            .first()
            .copied()
            .ok_or(Error::Singular("chain has no elastic mode"))
    };
    let (f_lo, f_hi) = (first(k_lo)?, first(k_hi)?);
    if !(target_hz >= f_lo && target_hz <= f_hi) {
        return Err(Error::OutsideRange {
            frequency: target_hz,
            low: f_lo,
            high: f_hi,
        });
    }
    let (mut a, mut b) = (log(k_lo), log(k_hi));
    let mut iterations = 0;
    let mut mid = 0.5 * (a + b);
    let mut f_mid = first(exp(mid))?;
    while iterations < 200 && (f_mid - target_hz).abs() > 1e-9 * target_hz {
        if f_mid < target_hz {
            a = mid;
        } else {
            b = mid;
        }
        mid = 0.5 * (a + b);
        f_mid = first(exp(mid))?;
        iterations += 1;
    }
    Ok(HingeFit {
        stiffness: exp(mid),
        frequency: f_mid,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;
    use approx::assert_relative_eq;

    fn aluminium() -> Material {
        Material {
            name: "A6061".into(),
            youngs_modulus: 68.9e9,
            density: 2700.0,
            tensile_strength: 295e6,
            specific_heat: 897.0,
            conductivity: 167.0,
            allowable_stress_factor: None,
        }
    }

    fn panel(length: f64) -> PanelSpec {
        PanelSpec {
            name: String::from("p"),
            length,
            width: 0.073,
            thickness: 0.0012,
            material: "A6061".into(),
            total_mass: 0.117,
        }
    }

    fn layout(boundary: BoundaryCondition, elements: usize) -> ChainLayout {
        ChainLayout {
            gap: 0.0,
            hinges: Vec::new(),
            boundary,
            elements_per_panel: elements,
        }
    }

    fn ei_mu(p: &PanelSpec) -> (f64, f64) {
        (
            68.9e9 * p.width * p.thickness * p.thickness * p.thickness / 12.0,
            p.total_mass / p.length,
        )
    }

    #[test]
    fn pinned_panel_matches_closed_forms() {
        let p = panel(0.261);
        let chain = build_chain(
            core::slice::from_ref(&p),
            &[aluminium()],
            &layout(BoundaryCondition::PinnedPinned, 20),
        )
        .unwrap();
        let (ei, mu) = ei_mu(&p);
        let l = p.length;
        let f1 = PI / 2.0 * sqrt(ei / (mu * l * l * l * l));
        let modal = modal_frequencies(&chain, 3).unwrap();
        assert_relative_eq!(modal.frequencies[0], f1, max_relative = 1e-4);
        assert_relative_eq!(f1, 29.3, epsilon = 0.05);

        let s = static_load(&chain, 1.0).unwrap();
        let w = mu * STANDARD_GRAVITY;
        assert_relative_eq!(
            s.max_deflection,
            5.0 * w * l.powi(4) / (384.0 * ei),
            max_relative = 1e-6
        );
        let sigma = w * l * l / 8.0 / (p.width * p.thickness * p.thickness / 6.0);
        assert_relative_eq!(s.max_stress, sigma, max_relative = 1e-6);
        assert_relative_eq!(s.stress_at, l / 2.0, epsilon = 1e-9);
    }

    #[test]
    fn cantilever_matches_closed_form() {
        let p = panel(0.261);
        let chain = build_chain(
            core::slice::from_ref(&p),
            &[aluminium()],
            &layout(BoundaryCondition::ClampedFree, 20),
        )
        .unwrap();
        let (ei, mu) = ei_mu(&p);
        let f1 = 1.875104_f64.powi(2) / (2.0 * PI) * sqrt(ei / (mu * p.length.powi(4)));
        let modal = modal_frequencies(&chain, 1).unwrap();
        assert_relative_eq!(modal.frequencies[0], f1, max_relative = 1e-4);
        assert_eq!(modal.rigid_modes, 0);
    }

    #[test]
    fn free_chain_reports_two_rigid_modes() {
        let chain = build_chain(&[panel(0.261)], &[aluminium()], &layout(BoundaryCondition::Free, 16)).unwrap();
        let modal = modal_frequencies(&chain, 2).unwrap();
        assert_eq!(modal.rigid_modes, 2);
        assert!(modal.frequencies[0] > 1.0);
        assert!(static_load(&chain, 1.0).is_err());
    }

    #[test]
    fn four_panel_span_with_gaps() {
        let mut l = layout(BoundaryCondition::ClampedFree, 8);
        l.gap = 0.002;
        let panels = vec![panel(0.261); 4];
        let chain = build_chain(&panels, &[aluminium()], &l).unwrap();
        assert_relative_eq!(chain.span(), 1.050, epsilon = 1e-12);
        assert_relative_eq!(chain.total_mass(), 0.468, epsilon = 1e-12);
    }

    #[test]
    fn hinge_springs_add_rotation_unknowns() {
        let mut l = layout(BoundaryCondition::ClampedEnds, 8);
        l.hinges = vec![HingeSpec {
            joint: 0,
            stiffness: HingeStiffness::Spring(1.0),
        }];
        let panels = vec![panel(0.073); 2];
        let rigid = build_chain(&panels, &[aluminium()], &layout(BoundaryCondition::ClampedEnds, 8)).unwrap();
        let sprung = build_chain(&panels, &[aluminium()], &l).unwrap();
        assert_eq!(sprung.dof_count(), rigid.dof_count() + 1);
        let f_soft = modal_frequencies(&sprung, 1).unwrap().frequencies[0];
        let f_rigid = modal_frequencies(&rigid, 1).unwrap().frequencies[0];
        assert!(f_soft < f_rigid);
    }

    #[test]
    fn bad_joint_index() {
        let mut l = layout(BoundaryCondition::ClampedFree, 8);
        l.hinges = vec![HingeSpec {
            joint: 3,
            stiffness: HingeStiffness::Rigid,
        }];
        assert!(build_chain(&[panel(0.1), panel(0.1)], &[aluminium()], &l).is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)] // 3.14 G is a load level, not π
    fn strength_checks() {
        assert_relative_eq!(
            allowable_from_stress_per_g(28.18e6, 88.5e6).unwrap(),
            3.14,
            epsilon = 0.005
        );
        assert_eq!(allowable_from_stress_per_g(2.14e6, 0.0).unwrap(), 0.0);
        assert_eq!(allowable_from_stress_per_g(0.0, 88.5e6), Err(Error::ZeroStress));

        let rail = rail_load_check(46.6, 0.0085 * 0.0085, &aluminium(), 0.30).unwrap();
        assert_relative_eq!(rail.stress, 0.645e6, max_relative = 1e-3);
        assert!(rail.pass);
        assert_eq!(rail_load_check(0.0, 1e-4, &aluminium(), 0.3).unwrap().stress, 0.0);
        assert!(!rail_load_check(100.0, 1e-6, &aluminium(), 0.3).unwrap().pass);
    }

    #[test]
    fn envelope_is_strict() {
        assert!(envelope_check(0.0047, 0.0, 0.0065).unwrap().pass);
        assert!(!envelope_check(0.007, 0.0, 0.0065).unwrap().pass);
        assert!(!envelope_check(0.0065, 0.0, 0.0065).unwrap().pass);
    }
}
