//! The regular fragment over the empty theory: parsing, conjunctive-query
//! normal forms, entailment by homomorphisms, and the syntactic doctrine.

mod query;
mod syntactic;
mod syntax;

pub use query::{entails_empty, entails_queries, instantiate, normalize, CanonicalQuery, Entailment, Node, Structure, Witness};
pub use syntactic::{horn_selection, materialize, materialize_with_horn, named_context, syntactic_doctrine, var_name, ContextCat, STerm, Subst, SyntacticDoctrine};
pub use syntax::{check_formula, check_sequent, parse_formula, parse_sequent, parse_theory, show_context, ConstSym, Context, Formula, FunSym, RelSym, Sequent, Show, Signature, Term};
