import os

from configs.logging_config import logger
from src.exceptions import ArtifactWriteError


def ensure_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as e:
        raise ArtifactWriteError(path, e.strerror or str(e)) from e
    if not os.access(path, os.W_OK):
        raise ArtifactWriteError(path, 'directory is not writable')
    return path


def write_text(path, text):
    try:
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    except OSError as e:
        raise ArtifactWriteError(path, e.strerror or str(e)) from e
    logger.debug(f'wrote {path}')
    return path


def write_frame(path, frame):
    """DataFrame 写成带表头的 CSV，浮点按最短可往返的十进制写出"""
    try:
        frame.to_csv(path, index=False, lineterminator='\n')
    except OSError as e:
        raise ArtifactWriteError(path, e.strerror or str(e)) from e
    logger.debug(f'wrote {path} ({len(frame)} rows)')
    return path


def write_jsonl(path, records):
    """pydantic 模型逐行写出（按别名序列化）"""
    return write_text(path, ''.join(record.model_dump_json(by_alias=True) + '\n' for record in records))
