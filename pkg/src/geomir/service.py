"""HTTP facade: query sessions, layout frames, stepping and pin/drag.

The service holds one immutable Index shared by all requests and an
in-memory LRU of sessions. Each session owns a layout simulation;
mutating calls (step/pin/release) take the session's lock without
blocking, so overlapping mutations of one session answer 409. The
service drives no clock: clients advance time with step?n=K.
"""

import io
import threading
from collections import OrderedDict

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from PIL import Image
from pydantic import BaseModel

from . import layout as lay
from .errors import (
    DegenerateImage,
    EmptyIndex,
    UndecodableImage,
    UnknownImage,
    UnknownParticle,
)
from .index_io import Index
from .layout import LayoutConfig
from .retrieval import QueryConfig, query

MAX_SESSIONS = 32
THUMB_MAX_SIDE = 128


class PinBody(BaseModel):
    particle: str
    x: float
    y: float


class ReleaseBody(BaseModel):
    particle: str


class Session:
    def __init__(self, session_id, result, graph):
        self.id = session_id
        self.result = result
        self.graph = graph
        self.lock = threading.Lock()

    def frame(self) -> dict:
        snap = self.graph.snapshot()
        snap["draw_order"] = list(self.result.draw_order)
        return snap


class SessionStore:
    """LRU keyed by session id; oldest session evicted past MAX_SESSIONS."""

    def __init__(self, limit=MAX_SESSIONS):
        self._limit = limit
        self._sessions = OrderedDict()
        self._lock = threading.Lock()
        self._counter = 0

    def create(self, result, graph) -> Session:
        with self._lock:
            self._counter += 1
            session = Session(f"s{self._counter}", result, graph)
            self._sessions[session.id] = session
            while len(self._sessions) > self._limit:
                self._sessions.popitem(last=False)
            return session

    def get(self, session_id) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
            self._sessions.move_to_end(session_id)
            return session


def create_app(
    index: Index,
    query_cfg: QueryConfig = QueryConfig(),
    layout_cfg: LayoutConfig = LayoutConfig(),
) -> FastAPI:
    app = FastAPI(title="geomir")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = SessionStore()
    app.state.sessions = store
    thumbs = {}

    def mutate(session_id):
        session = store.get(session_id)
        if not session.lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="session is being mutated")
        return session

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "images": len(index.ids)}

    @app.post("/query")
    async def post_query(request: Request):
        form = await request.form()
        upload = form.get("image")
        if upload is None:
            raise HTTPException(status_code=400, detail="multipart field 'image' required")
        data = await upload.read()
        try:
            result = query(data, index, query_cfg)
        except (UndecodableImage, DegenerateImage) as exc:
            raise HTTPException(status_code=400, detail=f"UndecodableImage: {exc}")
        except EmptyIndex as exc:
            raise HTTPException(status_code=400, detail=f"EmptyIndex: {exc}")
        except UnknownImage as exc:
            raise HTTPException(status_code=400, detail=f"UnknownImage: {exc}")
        graph = lay.build_graph(result.geo_tree, layout_cfg)
        session = store.create(result, graph)
        return {"session_id": session.id, "result": result.to_dict(), "frame": session.frame()}

    @app.post("/session/{session_id}/step")
    def post_step(session_id: str, n: int = Query(default=1, ge=1, le=100000)):
        session = mutate(session_id)
        try:
            for _ in range(n):
                lay.step(session.graph, layout_cfg)
            return session.frame()
        finally:
            session.lock.release()

    @app.get("/session/{session_id}/frame")
    def get_frame(session_id: str):
        return store.get(session_id).frame()

    @app.post("/session/{session_id}/pin")
    def post_pin(session_id: str, body: PinBody):
        session = mutate(session_id)
        try:
            lay.pin(session.graph, body.particle, body.x, body.y)
            return session.frame()
        except UnknownParticle as exc:
            raise HTTPException(status_code=404, detail=f"UnknownParticle: {exc}")
        finally:
            session.lock.release()

    @app.post("/session/{session_id}/release")
    def post_release(session_id: str, body: ReleaseBody):
        session = mutate(session_id)
        try:
            lay.release(session.graph, body.particle)
            return session.frame()
        except UnknownParticle as exc:
            raise HTTPException(status_code=404, detail=f"UnknownParticle: {exc}")
        except lay.CannotReleaseRoot as exc:
            raise HTTPException(status_code=400, detail=f"CannotReleaseRoot: {exc}")
        finally:
            session.lock.release()

    @app.get("/thumb/{image_id}")
    def get_thumb(image_id: str):
        if image_id in thumbs:
            return Response(content=thumbs[image_id], media_type="image/png")
        path = index.files.get(image_id)
        if path is None:
            raise HTTPException(status_code=404, detail=f"unknown image {image_id}")
        try:
            img = Image.open(path).convert("RGB")
        except OSError:
            raise HTTPException(status_code=404, detail=f"cannot read image {image_id}")
        img.thumbnail((THUMB_MAX_SIDE, THUMB_MAX_SIDE))
        buf = io.BytesIO()
        img.save(buf, format="PNG")
        thumbs[image_id] = buf.getvalue()
        return Response(content=thumbs[image_id], media_type="image/png")

    return app
