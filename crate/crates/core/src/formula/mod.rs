//! Instances, templates, and their text formats.

mod instance;
mod template;
mod text;

pub use instance::{Colour, Colouring, Instance, InstanceError, Var, Variable};
pub use template::{Graph, GraphError, Template};
pub use text::{
    parse_instance, parse_template, serialize_instance, serialize_template, ParseError,
};
