//! Problem and instance documents, the bundled problem corpus, synthetic
//! scenes, and the bench pipeline behind the CLI.

pub mod bench;
pub mod grammar;
pub mod h13f;
pub mod instance;
pub mod problem;
pub mod registry;
pub mod triangulation;
