pub mod canonical;
pub mod model;
pub mod parser;
pub mod pipeline;
pub mod preprocess;
pub mod prompt;
pub mod reasoner;
pub mod rewrite;
pub mod sampler;
pub mod verbaliser;
