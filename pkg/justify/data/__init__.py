"""Dataset ingestion: loading, normalizing and validating choice data files."""
