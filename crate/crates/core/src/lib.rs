//! Exact decision engine for screening loan cash-flow streams against
//! interest-rate caps and floors.
//!
//! A loan contract is modelled as a finite stream of dated transactions.
//! Whether the contract stays under a legal rate cap is a question about the
//! sign of its net present value over a whole range of discount rates, not at
//! a single point, and the answer has to be certified: regulators and courts
//! care about the boundary cases. The engine therefore works in exact
//! rational arithmetic end to end. A change of variable turns the NPV
//! function into an ordinary polynomial, and Sturm-sequence root isolation
//! decides every sign question with a certificate (an isolating bracket or a
//! rational witness point) instead of a float tolerance.
//!
//! Module map:
//!
//! * [`cashflow`] — streams of dated transactions, their vector-space
//!   operations, and the cumulative dominance order.
//! * [`discounting`] — rate specifications, float NPV evaluation, and exact
//!   compounding along piecewise-constant benchmark paths.
//! * [`expoly`] — the exact kernel: polynomial encoding of a stream,
//!   squarefree decomposition, Sturm counts, certified root isolation, and
//!   sign evaluation at algebraic cutoff points.
//! * [`irr`] — stream classification (two-transaction loans, pure loans,
//!   conventional IRR, and the wider classes) and the certified internal
//!   rate together with its lower/upper refinements.
//! * [`caps`] — the legality tests themselves: strong and weak caps, the
//!   floor, joint floor-plus-cap classification with fault assignment, and
//!   the dominating-pure-loan witness construction.
//! * [`oracle`] — an independent floating-point sign-scan used to
//!   cross-check the exact kernel and to serve approximate float-mode
//!   queries.

pub mod caps;
pub mod cashflow;
pub mod discounting;
pub mod expoly;
pub mod irr;
pub mod oracle;

mod rat;
