//! Skew products `T(x, y) = (x + alpha, f(x) + y)` on the two-torus.
//!
//! The crate covers the numerical side of these systems: certified
//! separated/spanning witnesses for topological complexity together with the
//! analytic linear bounds, continued-fraction and small-divisor machinery,
//! the Fourier coboundary test for the order-2 criterion, and finite-horizon
//! orbit probes (coverage, Birkhoff averages, regionally proximal pairs).

pub mod complexity;
pub mod diophantine;
pub mod error;
pub mod funcspace;
pub mod numeric;
pub mod order2;
pub mod probes;
pub mod skew;
pub mod torus;

pub use complexity::{
    bound_formulas, certify_separated, complexity_report, greedy_separated, growth_fit, separated_construct,
    spanning_construct, BoundFormulas, ComplexityReport, GrowthFit, PartitionPlan, SeparatedSet,
};
pub use diophantine::{
    cf_expand, convergents, find_nk, v_estimate, Alpha, Approximability, ContinuedFraction, Convergent,
    DiophantineReport, ResonantSequence,
};
pub use error::{Error, Result};
pub use funcspace::{FlFunction, FourierSeries, FourierTerm, PeriodicPart, PiecewiseLinear};
pub use order2::{
    build_counterexample, coboundary_coeffs, order2_verdict, synthesize_phi, CoboundaryReport, Counterexample,
    Order2Class, Verdict,
};
pub use probes::{
    deviation_search, distal_diagnostic, ergodic_average, minimality_probe, qpair_witness, CoverageReport,
    DeviationReport, DeviationSearch, DistalDiagnostic, Observable, QPairWitness,
};
pub use skew::{birkhoff_lift, birkhoff_prefix, SkewProduct};
pub use torus::{circle_dist, reduce, torus_dist, CirclePoint, TorusPoint};
