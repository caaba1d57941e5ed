import json


def parse_value(text):
    """值按 JSON 解析（数字、列表、布尔、带引号的字符串），解析失败则作为裸字符串"""
    text = text.strip()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_flat(text, source='<string>') -> dict:
    """
    解析扁平键值格式

    每行一条 `section.key = value`，`#` 开头为注释，空行忽略。
    同一个键出现两次视为错误。
    """
    flat = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if '=' not in line:
            raise ValueError(f'{source}:{lineno}: expected "key = value", got {raw!r}')
        key, value = line.split('=', 1)
        key = key.strip()
        if not key or any(not part for part in key.split('.')):
            raise ValueError(f'{source}:{lineno}: malformed key {key!r}')
        if key in flat:
            raise ValueError(f'{source}:{lineno}: duplicate key {key!r}')
        flat[key] = parse_value(value)
    return flat


def read_flat(path) -> dict:
    with open(path, 'r', encoding='utf-8') as f:
        return parse_flat(f.read(), source=str(path))


def nest(flat: dict) -> dict:
    """{'model.d': 1} -> {'model': {'d': 1}}"""
    nested = {}
    for key, value in flat.items():
        parts = key.split('.')
        node = nested
        for depth, part in enumerate(parts[:-1]):
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ValueError(f'key {key!r} conflicts with value at {".".join(parts[:depth + 1])!r}')
            node = child
        if isinstance(node.get(parts[-1]), dict):
            raise ValueError(f'key {key!r} conflicts with section of the same name')
        node[parts[-1]] = value
    return nested


def flatten(nested: dict, prefix='') -> dict:
    flat = {}
    for key, value in nested.items():
        path = f'{prefix}.{key}' if prefix else str(key)
        if isinstance(value, dict):
            flat.update(flatten(value, path))
        else:
            flat[path] = value
    return flat


def dump_flat(flat: dict, header=None) -> str:
    """按键排序输出，值用 JSON 编码，保证同一配置得到同一文本"""
    lines = [f'# {line}' for line in (header or '').splitlines()]
    for key in sorted(flat):
        lines.append(f'{key} = {json.dumps(flat[key], ensure_ascii=False)}')
    return '\n'.join(lines) + '\n'
