"""Command line interface: render, sweep, bake, estimate, serve."""

import argparse
import json
import os
import sys

import numpy as np

from .params import ParameterError, WoodParams
from .presets import preset, preset_names
from .render import (SlabScene, cut_scene, render_slab, light_sweep, bake_textures,
                     save_png, save_pfm, save_texture_set)
from .schema import params_from_json, params_to_json

EXIT_VALIDATION = 2


def _load_params(args):
    if getattr(args, "params", None):
        with open(args.params) as f:
            doc = json.load(f)
        params = params_from_json(doc)
    elif getattr(args, "preset", None):
        params = preset(args.preset)
    else:
        params = WoodParams()
    if getattr(args, "seed", None) is not None:
        params = params.with_seed(args.seed)
    params.validate()
    return params


def _parse_size(text):
    w, h = text.lower().split("x")
    return int(w), int(h)


def _scene_from_args(args):
    w, h = _parse_size(args.size)
    cut = args.cut
    common = dict(width=w, height=h, light_elevation=args.light[0],
                  light_azimuth=args.light[1], exposure=args.exposure)
    if cut in ("tangential", "radial", "transverse"):
        return cut_scene(cut, offset=args.offset, size=args.extent, **common)
    # explicit plane: "ox,oy,oz/ux,uy,uz/vx,vy,vz"
    try:
        o, u, v = (tuple(float(x) for x in part.split(","))
                   for part in cut.split("/"))
    except ValueError:
        raise ParameterError("cut", "expected a named cut or ox,oy,oz/ux,uy,uz/vx,vy,vz")
    return SlabScene(origin=o, u_axis=u, v_axis=v, extent=(args.extent, args.extent),
                     **common).validate()


def _light(text):
    elev, azim = (float(x) for x in text.split(","))
    return elev, azim


def _arc(text):
    a0, a1 = (float(x) for x in text.split(","))
    return a0, a1


def _add_scene_args(sp):
    sp.add_argument("--cut", default="tangential",
                    help="tangential|radial|transverse or ox,oy,oz/ux,uy,uz/vx,vy,vz")
    sp.add_argument("--size", default="512x512", help="image size WxH")
    sp.add_argument("--extent", type=float, default=4.0, help="slab extent, world units")
    sp.add_argument("--offset", type=float, default=6.0,
                    help="cut plane offset from the pith")
    sp.add_argument("--light", type=_light, default=(45.0, 90.0),
                    help="directional light elev,azim in degrees")
    sp.add_argument("--exposure", type=float, default=1.0)
    sp.add_argument("--workers", type=int, default=1)


def _add_params_args(sp):
    sp.add_argument("--params", help="parameter JSON file")
    sp.add_argument("--preset", choices=preset_names(), help="named preset")


def build_parser():
    ap = argparse.ArgumentParser(prog="woodtex",
                                 description="procedural solid wood materials")
    ap.add_argument("--seed", type=int, default=None, help="global texture seed (u64)")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("render", help="render one slab image")
    _add_params_args(r)
    _add_scene_args(r)
    r.add_argument("--out", required=True, help="output PNG path")
    r.add_argument("--hdr", help="also write a linear PFM here")

    s = sub.add_parser("sweep", help="render a light sweep sequence")
    _add_params_args(s)
    _add_scene_args(s)
    s.add_argument("--frames", type=int, required=True)
    s.add_argument("--arc", type=_arc, default=(10.0, 170.0),
                   help="light elevation arc a0,a1 in degrees")
    s.add_argument("--out", required=True, help="output directory")

    b = sub.add_parser("bake", help="bake parameter textures")
    _add_params_args(b)
    _add_scene_args(b)
    b.add_argument("--maps", default="all", choices=["all"])
    b.add_argument("--res", type=int, default=512)
    b.add_argument("--out", required=True, help="output directory")

    e = sub.add_parser("estimate", help="estimate color parameters from a photo")
    e.add_argument("--photo", required=True)
    e.add_argument("--out", required=True, help="output params JSON path")

    v = sub.add_parser("serve", help="run the preview HTTP service")
    v.add_argument("--host", default="127.0.0.1")
    v.add_argument("--port", type=int, default=8605)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--ui-dir", help="serve this directory at / (designer UI)")
    return ap


def cmd_render(args):
    params = _load_params(args)
    scene = _scene_from_args(args)
    img = render_slab(scene, params, workers=args.workers)
    save_png(args.out, img)
    if args.hdr:
        save_pfm(args.hdr, render_slab(scene, params, workers=args.workers, hdr=True))
    return 0


def cmd_sweep(args):
    params = _load_params(args)
    scene = _scene_from_args(args)
    frames = light_sweep(scene, params, args.frames, arc=args.arc,
                         workers=args.workers)
    os.makedirs(args.out, exist_ok=True)
    digits = max(3, len(str(len(frames) - 1)))
    for i, frame in enumerate(frames):
        save_png(os.path.join(args.out, f"frame_{i:0{digits}d}.png"), frame)
    return 0


def cmd_bake(args):
    params = _load_params(args)
    args.size = f"{args.res}x{args.res}"
    scene = _scene_from_args(args)
    textures = bake_textures(params, scene, workers=args.workers)
    save_texture_set(textures, args.out, params)
    return 0


def cmd_estimate(args):
    from PIL import Image
    from .model import estimate_color_params
    try:
        img = Image.open(args.photo).convert("RGB")
    except OSError as e:
        raise ParameterError("photo", str(e))
    est = estimate_color_params(np.asarray(img, dtype=float) / 255.0)
    doc = params_to_json(WoodParams(sigma=tuple(float(x) for x in est.sigma),
                                    path_offset=float(est.path_offset),
                                    path_ring=float(est.path_ring)))
    with open(args.out, "w") as f:
        json.dump(doc, f, indent=2)
    print("earlywood", [round(float(x), 4) for x in est.earlywood])
    print("latewood ", [round(float(x), 4) for x in est.latewood])
    return 0


def cmd_serve(args):
    import uvicorn
    from .service import create_app
    app = create_app(seed=args.seed, workers=args.workers)
    if args.ui_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=args.ui_dir, html=True), name="ui")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


COMMANDS = {"render": cmd_render, "sweep": cmd_sweep, "bake": cmd_bake,
            "estimate": cmd_estimate, "serve": cmd_serve}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParameterError as e:
        print(f"parameter error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
