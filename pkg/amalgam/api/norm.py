# amalgam/api/norm.py
# `amalgam norm`: space norms of WGF1 files or built-in generators

import logging

from amalgam.api.common import emit_model, parse_grid, parse_space
from amalgam.core.exceptions import AmalgamException, UsageException, handle_amalgam_exception
from amalgam.core.config import settings
from amalgam.services.generator_service import generator_service
from amalgam.services.grid_service import grid_service
from amalgam.services.norm_service import norm_service

logger = logging.getLogger(__name__)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("norm", parents=parents, help="Compute a space norm on a periodic grid")
    parser.add_argument("--space", required=True, help="Space, e.g. 'W[p=2,q=2,s=0]'")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--in", dest="path", help="WGF1 file with the samples")
    source.add_argument("--gen", choices=generator_service.names, help="Built-in test function")
    parser.add_argument("--grid", help="Grid for --gen, e.g. d=1,N=4096,P=16")
    parser.add_argument("--seed", type=int, default=settings.PROBE_SEED, help="Seed of random generators")
    parser.add_argument("--out", help="Write the NormResult JSON here instead of stdout")
    parser.set_defaults(handler=cmd_norm)


def cmd_norm(args) -> int:
    try:
        space = parse_space(args.space)
        if args.path:
            if args.grid:
                raise UsageException("--grid applies to --gen; WGF1 files carry their own grid")
            f = grid_service.read_wgf1(args.path)
        else:
            f = generator_service.generate(args.gen, parse_grid(args.grid), seed=args.seed)
        result = norm_service.space_norm(space, f)
        emit_model(result, args.out)
        return 0

    except AmalgamException as e:
        return handle_amalgam_exception(e)
    except FileNotFoundError as e:
        return handle_amalgam_exception(UsageException(f"cannot read {e.filename}"))
