//! Regular and exact completions, graph functors and the regular-category
//! toolkit: regular epis, images, projectives and equivalence checks.

mod analysis;
mod exreg;
mod functor;
mod graph;
mod relcat;

pub use analysis::{
    check_exactness, check_regular, embedding_into_top, graph_arrow, image_factorization, is_mono_rel, is_regular_epi,
    is_regular_projective, projection_cover, projectivity_witness,
};
pub use exreg::{ex_comparison, ex_lex, ex_reg_crosscheck, reg_lex, ExReg};
pub use functor::{check_equivalence, check_functor, Functor};
pub use graph::{check_extends_graph, check_lex, check_psi_to_pcx, completion_functor, graph_functor, iota, psi, psi_to_pcx, Embedded, PsiToPcx};
pub use relcat::{
    ex_completion, graph_rel, is_entire_functional, is_ex_arrow, is_per, reg_completion, Kind, RelArrow, RelCat, RelCatOf,
    DEFAULT_BUDGET,
};
