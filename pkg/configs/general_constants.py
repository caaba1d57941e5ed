import os
import json
from dotenv import load_dotenv

# 加载环境变量与基础配置
load_dotenv()
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# 输出目录与并行度
OUTPUT_ROOT = os.getenv('SPREADLAB_OUTPUT_DIR', os.path.join(PROJECT_ROOT, 'runs'))
DEFAULT_JOBS = int(os.getenv('SPREADLAB_JOBS', 2))

# 默认分辨率
DEFAULT_DX = float(os.getenv('SPREADLAB_DX', 0.2))
DEFAULT_SAFETY = float(os.getenv('SPREADLAB_SAFETY', 0.4))
DEFAULT_SNAPSHOT_EVERY = float(os.getenv('SPREADLAB_SNAPSHOT_EVERY', 1.0))

# 截断区间：前沿距边界不足 10 个网格即标记污染；区间半宽至少 c*t_end + 20*dx + w
BOUNDARY_GUARD_CELLS = 10
DOMAIN_MARGIN_CELLS = 20

# 前沿与速度拟合
FRONT_LEVEL_FRACTION = 0.5
FIT_WINDOW_FRACTION = 0.4
FIT_T_MIN = 10.0
MIN_FIT_POINTS = 5

# 速度界允许的偏差（相对于界本身）：拉动型前沿从下方逼近，下方放宽
LOWER_REL_TOL = 0.05
UPPER_REL_TOL = 0.04

# 性质检查容差
ORDER_TOLERANCE = 1e-8
BOX_TOLERANCE = 1e-8
CONVERGENCE_TOLERANCE = 0.05
FLOOR_TOLERANCE = 0.05


def load_scenario_json(json_path):
    """加载并验证场景预设 JSON"""
    if not os.path.exists(json_path):
        raise FileNotFoundError(f"场景配置文件不存在：{json_path}\n请检查configs目录")

    try:
        with open(json_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ValueError(f"JSON格式错误：{json_path}\n{str(e)}")


# 加载场景配置
scenario_config = load_scenario_json(os.path.join(PROJECT_ROOT, "configs", "scenario_config.json"))

SCENARIOS = scenario_config["SCENARIOS"]
SUITES = scenario_config["SUITES"]
ACCEPTANCE = scenario_config["ACCEPTANCE"]


def check_essential_dirs():
    """检查并创建必要目录"""
    if not os.path.exists(OUTPUT_ROOT):
        os.makedirs(OUTPUT_ROOT, exist_ok=True)
        print(f"已创建目录：{OUTPUT_ROOT}")
