#![allow(dead_code)]

pub mod fixtures;
pub mod gen;
pub mod oracle;
