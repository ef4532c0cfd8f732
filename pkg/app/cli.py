"""
模块名称：cli.py
主要功能：命令行入口，读取JSON运行配置，计算并输出结果CSV与运行清单

用法：
    python -m app.cli --config run.json --out results/ [--threads 4] [--seed 7]

退出码：0 成功；2 配置校验失败；3 数值计算失败
"""

import argparse
import json
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
import pydantic
import scipy
from pydantic import ValidationError

from app.analysis import montecarlo, reuse_planner, scenario, sir_analysis
from app.core.config import settings
from app.core.errors import DimensionMismatch, NumericalError
from app.core.logging import configure_logging, get_logger
from app.schemas.reuse import ReuseConfig
from app.schemas.run import RunConfig
from app.schemas.series import SeriesConfig

logger = get_logger(__name__)

RESULT_COLUMNS = ["swept_value", "analytic_value", "error_bound", "mc_mean", "mc_ci_lo", "mc_ci_hi"]
EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


def _validation_message(exc: ValidationError) -> str:
    """校验错误的消息，以点分路径标明出错的键"""
    lines = []
    for error in exc.errors():
        key = ".".join(str(part) for part in error["loc"]) or "<root>"
        lines.append(f"{key}: {error['msg']}")
    return "; ".join(lines)


def _mc_columns(estimate) -> Dict[str, float]:
    if estimate is None:
        return {}
    return {"mc_mean": estimate.mean, "mc_ci_lo": estimate.ci_lo, "mc_ci_hi": estimate.ci_hi}


class Runner:
    """
    按命令执行计算

    Attributes:
        config: 运行配置
        threads: 工作线程数
        cfg: 级数配置
    """

    def __init__(self, config: RunConfig, threads: int):
        self.config = config
        self.threads = threads
        self.cfg = SeriesConfig.from_settings()

    def _mc(self):
        return scenario.build_mc(self.config.mc, self.threads) if self.config.mc else None

    def _point(self, cfg: RunConfig, swept_value: float) -> Dict[str, float]:
        """单个场景点：解析值、误差界与可选的仿真结果"""
        problem = scenario.build_problem(cfg)
        P = scenario.resolve_series(problem, cfg.series)
        mc = self._mc()
        row = {"swept_value": swept_value}
        if cfg.metric == "outage":
            result = sir_analysis.outage_series(problem, P, self.cfg)
            row.update(analytic_value=result.value, error_bound=result.error_bound)
            if mc is not None:
                row.update(_mc_columns(montecarlo.simulate_outage(problem, mc)))
        else:
            row["analytic_value"] = sir_analysis.ergodic_rate(problem, P, self.cfg)
            if mc is not None:
                row.update(_mc_columns(montecarlo.simulate_rate(problem, mc)))
        return row

    def outage(self) -> pd.DataFrame:
        return self._frame([self._point(self.config.model_copy(update={"metric": "outage"}), self.config.T_dB)])

    def rate(self) -> pd.DataFrame:
        return self._frame([self._point(self.config.model_copy(update={"metric": "rate"}), self.config.T_dB)])

    def typical(self) -> pd.DataFrame:
        """典型用户：按面积平均的中断概率或速率"""
        c = self.config
        g = c.geometry
        layout = scenario.build_layout(g)
        soi = scenario.build_soi(c.soi)
        interferers = scenario.build_interferers(c.interferers, layout)
        T = scenario.db_to_linear(c.T_dB)
        value = sir_analysis.typical_user(c.metric, layout, soi, interferers, T, scenario.radial_grid(g),
                                          g.alpha, g.azimuth_rad, c.series.P, self.cfg)
        row = {"swept_value": c.T_dB, "analytic_value": value}
        mc = self._mc()
        if mc is not None:
            row.update(_mc_columns(montecarlo.simulate_typical_user(c.metric, layout, soi, interferers, T,
                                                                    g.alpha, mc)))
        return self._frame([row])

    def mc_validate(self, out: Path) -> pd.DataFrame:
        """中断概率与仿真对照，另输出批均值CSV与抽样器KS统计量"""
        problem = scenario.build_problem(self.config)
        P = scenario.resolve_series(problem, self.config.series)
        result = sir_analysis.outage_series(problem, P, self.cfg)
        mc = self._mc()
        batch_means = montecarlo.run_batches(montecarlo.outage_statistic(problem), mc)
        montecarlo.write_batches_csv(batch_means, out / "batches.csv")
        estimate = montecarlo.summarize(batch_means, mc.confidence)
        samples = min(max(montecarlo.KS_MIN_SAMPLES, mc.iterations * mc.batch_size), 50_000)
        ks = montecarlo.ks_validate_sampler(problem.soi, samples, mc.seed)
        row = {"swept_value": self.config.T_dB, "analytic_value": result.value,
               "error_bound": result.error_bound, **_mc_columns(estimate), "ks_statistic": ks}
        return pd.DataFrame([row], columns=RESULT_COLUMNS + ["ks_statistic"])

    def _reuse_config(self) -> ReuseConfig:
        r = self.config.reuse
        return ReuseConfig(scheme=r.scheme, S_t=scenario.db_to_linear(r.S_t_dB), beta=r.beta, prbs=r.prbs,
                           users_per_cell=r.users_per_cell, classification_prb_count=r.classification_prb_count)

    def reuse(self) -> pd.DataFrame:
        """FFR与SFR的平均速率；配置了mc时按方案仿真"""
        c = self.config
        g = c.geometry
        rc = self._reuse_config()
        layout = scenario.build_layout(g)
        soi = scenario.build_soi(c.soi)
        interferers = scenario.build_interferers(c.interferers, layout)
        grid = scenario.radial_grid(g)
        P = c.series.P
        row = {
            "m": c.soi.m,
            "ffr_rate": reuse_planner.ffr_rate(layout, soi, interferers, rc.S_t, grid, g.alpha, g.azimuth_rad, P,
                                               self.cfg),
            "sfr_rate": reuse_planner.sfr_rate(layout, soi, interferers, rc.S_t, rc.beta, grid, g.alpha,
                                               g.azimuth_rad, P, self.cfg),
        }
        columns = ["m", "ffr_rate", "sfr_rate"]
        mc = self._mc()
        if mc is not None:
            row.update(_mc_columns(reuse_planner.simulate_reuse(rc, layout, soi, interferers, g.alpha, mc)))
            columns += ["mc_mean", "mc_ci_lo", "mc_ci_hi"]
        return pd.DataFrame([row], columns=columns)

    def sweep(self) -> pd.DataFrame:
        """
        参数扫描，扫描点分发到线程池，结果按扫描顺序输出

        变量为m且配置了reuse块时输出FFR/SFR对比（m, ffr_rate, sfr_rate）。
        """
        c = self.config
        s = c.sweep
        values = np.linspace(s.start, s.stop, s.points)
        if s.variable == "m" and c.reuse is not None:
            g = c.geometry
            layout = scenario.build_layout(g)
            interferers = scenario.build_interferers(c.interferers, layout)
            if len({h.model_dump_json() for h in interferers}) != 1:
                logger.warning("sweep_heterogeneous_interferers", used="first")
            return reuse_planner.sweep_m(self._reuse_config(), layout, scenario.build_soi(c.soi), interferers[0],
                                         values, scenario.radial_grid(g), g.alpha, g.azimuth_rad, c.series.P,
                                         self.cfg)

        def point(value: float) -> Dict[str, float]:
            return self._point(self._with_value(s.variable, float(value)), float(value))

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            rows = list(pool.map(point, values))
        return self._frame(rows)

    def _with_value(self, variable: str, value: float) -> RunConfig:
        c = self.config
        if variable == "T_dB":
            return c.model_copy(update={"T_dB": value})
        if variable in ("r_m", "alpha", "azimuth_rad"):
            return c.model_copy(update={"geometry": c.geometry.model_copy(update={variable: value})})
        return c.model_copy(update={"soi": c.soi.model_copy(update={variable: value})})

    @staticmethod
    def _frame(rows: List[Dict[str, float]]) -> pd.DataFrame:
        frame = pd.DataFrame(rows, columns=RESULT_COLUMNS)
        return frame.dropna(axis=1, how="all")

    def run(self, out: Path) -> pd.DataFrame:
        command = self.config.command
        if command == "mc-validate":
            return self.mc_validate(out)
        return getattr(self, command)()


def _manifest(config: RunConfig, wall_time: float) -> dict:
    return {
        "config": config.model_dump(mode="json", by_alias=True),
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "pandas": pd.__version__,
            "pydantic": pydantic.VERSION,
        },
        "project": settings.PROJECT_NAME,
        "wall_time_s": wall_time,
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kms-sir", description="κ-μ阴影衰落干扰受限链路的中断概率与速率计算")
    parser.add_argument("--config", required=True, type=Path, help="JSON运行配置")
    parser.add_argument("--out", type=Path, default=Path("results"), help="输出目录")
    parser.add_argument("--threads", type=int, default=None, help="工作线程数")
    parser.add_argument("--seed", type=int, default=None, help="随机种子（覆盖配置）")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    命令行主函数

    Args:
        argv: 命令行参数，缺省取sys.argv

    Returns:
        int: 退出码
    """
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        text = args.config.read_text(encoding="utf-8")
    except OSError as exc:
        logger.error("config_unreadable", path=str(args.config), error=str(exc))
        print(f"无法读取配置: {args.config}", file=sys.stderr)
        return EXIT_INVALID
    try:
        config = RunConfig.model_validate_json(text)
        if args.seed is not None and config.mc is not None:
            config = RunConfig.model_validate(
                {**config.model_dump(by_alias=True), "mc": {**config.mc.model_dump(), "seed": args.seed}}
            )
    except ValidationError as exc:
        message = _validation_message(exc)
        logger.error("config_invalid", path=str(args.config), errors=message)
        print(f"配置无效: {message}", file=sys.stderr)
        return EXIT_INVALID

    threads = args.threads if args.threads is not None else settings.WORKER_THREADS
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    logger.info("run_started", command=config.command, out=str(out), threads=threads)
    started = time.perf_counter()
    try:
        frame = Runner(config, max(1, threads)).run(out)
    except DimensionMismatch as exc:
        # 干扰块个数与布局不符属于配置错误
        logger.error("config_invalid", operation=exc.operation, detail=exc.detail)
        print(f"配置无效 [{exc.operation}]: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        logger.error("run_failed", operation=exc.operation, detail=exc.detail)
        print(f"计算失败 [{exc.operation}]: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    wall_time = time.perf_counter() - started

    frame.to_csv(out / "results.csv", index=False, float_format="%.12g")
    (out / "manifest.json").write_text(
        json.dumps(_manifest(config, wall_time), ensure_ascii=False, indent=2), encoding="utf-8"
    )
    logger.info("run_finished", command=config.command, rows=len(frame), wall_time_s=round(wall_time, 3))
    print(f"完成: {out / 'results.csv'}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
