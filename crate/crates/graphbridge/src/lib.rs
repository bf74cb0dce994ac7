//! Service side of graphbridge: the websocket endpoint that hosts one
//! interaction session per connection.

pub mod server;
