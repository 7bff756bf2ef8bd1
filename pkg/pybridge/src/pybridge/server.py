"""HTTP embedder implementing the query-embedding contract.

POST /embed with {"text": ...} returns {"vector": [...]}, the
unit-normalized mean-pooled sentence embedding.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel


class EmbedRequest(BaseModel):
    text: str


def create_app(encoder) -> FastAPI:
    app = FastAPI(title="pybridge embedder")

    @app.get("/health")
    def health():
        return {"status": "ok", "dim": encoder.dim}

    @app.post("/embed")
    def embed(req: EmbedRequest):
        if not req.text.strip():
            raise HTTPException(status_code=400, detail="empty text")
        row = encoder.encode([req.text])[0]
        norm = float(np.linalg.norm(row))
        if norm == 0.0:
            raise HTTPException(status_code=400, detail="text embeds to zero vector")
        return {"vector": (row / norm).tolist()}

    return app
