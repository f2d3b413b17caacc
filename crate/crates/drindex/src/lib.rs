//! Library side of the `drindex` tool: the index file format, the edit-script
//! format, seeded corpus generators and the subcommands themselves.

pub mod commands;
pub mod corpus;
pub mod format;
pub mod script;
