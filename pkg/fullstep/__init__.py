from arclet.alconna import Alconna, Args, CommandMeta, Option, Subcommand

__version__ = "0.3.0"

__plugin_meta__ = {
    "name": "fullstep",
    "description": "非对称锥规划的可行全牛顿步原始-对偶内点法，附单变量 SOS 下界实验。",
    "usage": """
## 🧮 求解锥规划

- `fullstep solve <问题文件>` - 求解 JSON 问题文件，RunReport 输出到 stdout
    - `--variant fixed|adaptive|largest` - τ 更新策略（默认 adaptive）
    - `--eta <η>` - 邻域半径，须满足 η ≤ 1/4（默认 0.25）
    - `--eps <ε>` - 停止容差（默认 1e-8）
    - `--init membership|two-phase|backwards|hsd` - 初始化方式（默认 hsd）
    - `--max-iter <N>`、`--trace <文件>`、`--check-invariants on|off`、`--timing on|off`

## 📐 SOS 下界

- `fullstep sos --example stengle --degree 20 --method two-phase`
- `fullstep sos <实例文件> --method hsd`

## 📊 猜想表

- `fullstep table --degrees 20,40,60,80 --methods two-phase,hsd --out table.csv`

## 🔧 其他

- `fullstep selftest --cone <锥文件>` - 障碍函数预言机自检
- `fullstep config [--init [路径]]` - 查看或写出默认配置

退出码: 0 正常（含 HSD 证书与无法分类），1 解析或配置错误，2 数值失败，3 达到迭代上限。
    """,
}

def _common_options() -> tuple[Option, ...]:
    return (
        Option("--variant", Args["variant", str], dest="variant", help_text="τ 更新策略 (fixed/adaptive/largest)"),
        Option("--eta", Args["eta", str], dest="eta", help_text="邻域半径 η ≤ 1/4"),
        Option("--eps", Args["eps", str], dest="eps", help_text="停止容差 ε"),
        Option("--max-iter", Args["max_iter", str], dest="max_iter", help_text="最大迭代次数"),
        Option("--check-invariants", Args["check_invariants", str], dest="check_invariants", help_text="逐次迭代检查不变量 (on/off)"),
        Option("--timing", Args["timing", str], dest="timing", help_text="报告中是否记录耗时 (on/off)"),
    )


fullstep_alc = Alconna(
    "fullstep",
    Option("--verbose|-v", dest="verbose", help_text="输出调试日志"),
    Subcommand(
        "solve",
        Args["problem", str],
        *_common_options(),
        Option("--init", Args["init", str], dest="init", help_text="初始化方式 (membership/two-phase/backwards/hsd)"),
        Option("--trace", Args["trace", str], dest="trace", help_text="将逐次迭代轨迹写入 JSON 文件"),
        help_text="求解 JSON 问题文件",
    ),
    Subcommand(
        "sos",
        Args["instance?", str],
        *_common_options(),
        Option("--example", Args["example", str], dest="example", help_text="内置实例 (stengle/interval)"),
        Option("--degree", Args["degree", str], dest="degree", help_text="层级 D（偶数）"),
        Option("--method", Args["method", str], dest="method", help_text="求解方式 (two-phase/hsd)"),
        Option("--trace", Args["trace", str], dest="trace", help_text="将两阶段轨迹写入 JSON 文件"),
        help_text="计算单变量多项式的 SOS 下界",
    ),
    Subcommand(
        "table",
        *_common_options(),
        Option("--degrees", Args["degrees", str], dest="degrees", help_text="逗号分隔的层级列表，或 起点:终点:步长"),
        Option("--methods", Args["methods", str], dest="methods", help_text="逗号分隔的求解方式"),
        Option("--out", Args["out", str], dest="out", help_text="CSV 输出文件（默认 stdout）"),
        Option("--workers", Args["workers", str], dest="workers", help_text="并行求解的最大行数"),
        help_text="生成 stengle 实例的猜想表",
    ),
    Subcommand(
        "selftest",
        Option("--cone", Args["cone", str], dest="cone", help_text="锥描述 JSON 文件"),
        Option("--example", Args["example", str], dest="example", help_text="内置 SOS 实例的矩锥"),
        Option("--degree", Args["degree", str], dest="degree", help_text="内置实例的层级 D"),
        Option("--seed", Args["seed", str], dest="seed", help_text="随机探测的种子"),
        help_text="障碍函数预言机自检",
    ),
    Subcommand(
        "config",
        Option("--init", Args["path?", str], dest="init", help_text="写出默认配置 TOML"),
        help_text="查看或写出配置",
    ),
    meta=CommandMeta(
        description="可行全牛顿步内点法求解器",
        usage="fullstep <solve|sos|table|selftest|config> ...",
        example="""
            fullstep solve fullstep/problems/lp_simple.json
            fullstep solve lp.json --variant fixed --init two-phase --trace t.json
            fullstep sos --example stengle --degree 20 --method two-phase
            fullstep table --degrees 20,40,60 --methods two-phase,hsd
        """,
    ),
)

from .handlers import dispatch, main  # noqa: E402

__all__ = ["dispatch", "fullstep_alc", "main"]
