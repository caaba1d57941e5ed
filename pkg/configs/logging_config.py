import logging
import os
from pathlib import Path
from logging.handlers import RotatingFileHandler

from colorama import Fore, Style, just_fix_windows_console

just_fix_windows_console()

# 使用 pathlib 创建日志目录
log_path = Path(os.getenv('SPREADLAB_LOG_FILE', 'logs/spreadlab.log'))
log_path.parent.mkdir(parents=True, exist_ok=True)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

LEVEL_COLORS = {
    logging.DEBUG: Fore.CYAN,
    logging.INFO: Fore.GREEN,
    logging.WARNING: Fore.YELLOW,
    logging.ERROR: Fore.RED,
    logging.CRITICAL: Fore.MAGENTA,
}


class ColorFormatter(logging.Formatter):
    """控制台按日志级别着色，文件日志保持纯文本"""

    def format(self, record):
        message = super().format(record)
        color = LEVEL_COLORS.get(record.levelno, '')
        return f'{color}{message}{Style.RESET_ALL}' if color else message


console_handler = logging.StreamHandler()
console_handler.setFormatter(ColorFormatter(LOG_FORMAT))

# 配置日志
logging.basicConfig(
    level=os.getenv('SPREADLAB_LOG_LEVEL', 'INFO').upper(),
    format=LOG_FORMAT,
    handlers=[
        RotatingFileHandler(
            str(log_path),
            maxBytes=1024 * 1024,
            backupCount=5,
            encoding='utf-8'
        ),
        console_handler
    ]
)

logger = logging.getLogger('spreadlab')
