"""Block-circulant knowledge graph embeddings for path query answering."""
