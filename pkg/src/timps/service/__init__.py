"""FastAPI service exposing the chain-analysis operations over JSON."""

from __future__ import annotations

from fastapi import FastAPI

from .routes import router


def create_app() -> FastAPI:
    app = FastAPI(
        title="timps",
        description=(
            "Symmetries, SLOCC classes, and state transformations of "
            "translationally invariant matrix product states."
        ),
        version="0.1.0",
    )
    app.include_router(router)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    return app


app = create_app()
