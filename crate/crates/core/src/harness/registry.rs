use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Named strategies of one kind, looked up by the name given in a config or on the command line.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<String, Box<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry { kind, entries: BTreeMap::new() }
    }

    /// Adds a strategy; a second registration under the same name is an error.
    pub fn register(&mut self, name: &str, entry: Box<T>) -> Result<()> {
        if self.entries.contains_key(name) {
            return Err(Error::Config(format!("{} '{name}' registered twice", self.kind)));
        }
        self.entries.insert(name.to_string(), entry);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| {
            Error::Config(format!("unknown {} '{name}' (known: {})", self.kind, self.names().join(", ")))
        })
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }
}
