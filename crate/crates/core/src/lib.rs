//! Convex entropy minimization on finite weighted ground spaces.
//!
//! The crate solves
//!
//! ```text
//! minimize  I(Q) = Σᵢ γ*(zᵢ, dQ/dR(zᵢ)) R(zᵢ)   subject to   ∫θ dQ ∈ C
//! ```
//!
//! through its concave dual, recovers the minimizer as `Q̂ = γ′(⟨ŷ, θ⟩) R`,
//! and attaches a numerical optimality certificate (duality gap, Young
//! identity residual, feasibility residual) to every solution.
//!
//! | Module | Role |
//! |--------|------|
//! | [`young`] | entropy catalog, conjugates, Young functions, Δ₂ classification |
//! | [`measure`] | ground spaces, integration, entropy values, Luxemburg norms |
//! | [`constraints`] | moment and marginal operators, target sets |
//! | [`dual`] | dual objective and Newton ascent |
//! | [`recovery`] | primal recovery and certificates |
//! | [`sinkhorn`] | marginal constraints by iterative proportional fitting |
//! | [`qualification`] | feasibility and interior diagnostics |
//! | [`oracle`] | brute-force primal minimizer for tiny instances |
//! | [`io`], [`cli`] | problem files, reports and the command-line front end |

pub mod cli;
pub mod constraints;
pub mod dual;
pub mod error;
pub mod io;
pub mod lp;
pub mod measure;
pub mod oracle;
pub mod qualification;
pub mod recovery;
pub mod sinkhorn;
pub mod young;

pub use constraints::{adjoint, apply_t, gram_matrix, marginal_adjoint, support_inf, MarginalMap, MomentMap, TargetSet};
pub use dual::{dual_gradient, dual_hessian, dual_objective, solve_dual, DualSolution, MomentProblem, SolveStatus, SolverOptions, Unboundedness};
pub use error::{Error, Result};
pub use recovery::{certificate, gamma_star_of, recover, DualCertificate};
pub use measure::{entropy_value, integrate, luxemburg_norm, Density, GroundSpace, Point};

pub use young::{conjugate_numeric, young_family, Catalog, EntropySpec, Interval, YoungFamily};
