//! Exact and high-precision arithmetic for modular forms and the number
//! fields cut out by their mod-l Galois representations.
//!
//! The crate is organised around the pipeline used to hunt for lightly
//! ramified PGL2/PSL2 number fields:
//!
//! - [`chartools`]: Dirichlet characters with exact cyclotomic values,
//!   Gauss sums, twisted Bernoulli numbers.
//! - [`series`]: truncated q-expansions over exact cyclotomic rationals,
//!   Z/pZ, or high-precision complex numbers; Eisenstein generators; the
//!   B_t / U_p / T_n action on old-form blocks.
//! - [`atkin`]: the explicit Atkin-Lehner action on newforms, new
//!   Eisenstein series, E^(N) and the old subspace, with a numeric slash
//!   oracle and cusp enumeration.
//! - [`qext`]: quasilinear extension of weight-2 q-expansion prefixes via
//!   bivariate modular-equation relations, Newton iteration in F_p[[q]] and
//!   centered CRT lifting under Deligne bounds.
//! - [`periods`]: twisted modular symbols and rapidly convergent period
//!   series with certified tail bounds, plus an independent quadrature
//!   oracle.
//! - [`repanalytics`]: subgroup/genus bookkeeping for X_H(lN), inertia
//!   orbit discriminant exponents, the root-discriminant predictor, image
//!   screening and the search driver.
//! - [`certify`]: factorization-shape scans, Frobenius-order-2 prime
//!   detection, candidate elimination and Dedekind-based ramification
//!   verification on candidate polynomials.
//!
//! Supporting layers: [`arith`] (word-size number theory), [`bigfloat`]
//! (arbitrary-precision real/complex arithmetic), [`cyclo`] (exact
//! cyclotomic numbers), [`fp`] (prime fields and NTT-based series
//! multiplication), [`linalg`] (dense kernels over an abstract field),
//! [`newform`] (ingested eigenform records).
//!
//! All values are immutable after construction and every operation is a
//! pure function, so the whole crate is safe for unrestricted parallel use.

pub mod arith;
pub mod atkin;
pub mod bigfloat;
pub mod certify;
pub mod chartools;
pub mod cyclo;
pub mod fp;
pub mod linalg;
pub mod newform;
pub mod periods;
pub mod qext;
pub mod repanalytics;
pub mod series;
