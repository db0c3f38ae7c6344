/** Wire types for the session service; field names match the server exactly. */
export {};
