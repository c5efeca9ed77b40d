//! Exact computation and exploration of the oriented L(2,1)-labeling number
//! of finite grid patches (square, triangular, hexagonal) and small digraphs.
//!
//! An oriented L(2,1)-labeling assigns nonnegative integer colors to nodes so
//! that endpoints of an arc differ by at least 2 and nodes joined by a
//! directed path of length 2 get distinct colors. The smallest achievable
//! span (maximum color, with 0 as the minimum) is written `lambda` here.
//!
//! The crate is organized as:
//! - [`lattice`]: integer-coordinate models of the three regular tilings and
//!   validated induced-subgraph patches;
//! - [`digraph`]: orientations, directed-distance constraint pairs, longest
//!   dipath, girth, automorphisms and canonical forms;
//! - [`solver`]: the exact backtracking solver, bounds, verification and a
//!   brute-force oracle;
//! - [`explorer`]: symmetry-reduced orientation sweeps, witness search and
//!   machine checks of structural claims;
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod digraph;
pub mod explorer;
pub mod lattice;
pub mod solver;
