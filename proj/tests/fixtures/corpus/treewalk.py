"""Generic ordered-tree traversal and pretty printing."""


class Node:
    def __init__(self, label, children=None):
        self.label = label
        self.children = list(children or [])

    def add(self, child):
        self.children.append(child)
        return child

    def is_leaf(self):
        return not self.children


def depth_first(root, visit):
    """Pre-order traversal; ``visit`` may return False to prune a subtree."""
    stack = [root]
    while stack:
        node = stack.pop()
        keep_going = visit(node)
        if keep_going is False:
            continue
        stack.extend(reversed(node.children))


def breadth_first(root):
    order = []
    frontier = [root]
    while frontier:
        next_frontier = []
        for node in frontier:
            order.append(node.label)
            next_frontier.extend(node.children)
        frontier = next_frontier
    return order


def find(root, predicate):
    found = None

    def check(node):
        nonlocal found
        if found is not None:
            return False
        if predicate(node):
            found = node
            return False
        return True

    depth_first(root, check)
    return found


def render(root, indent="  "):
    lines = []

    def walk(node, depth):
        lines.append(indent * depth + str(node.label))
        for child in node.children:
            walk(child, depth + 1)

    walk(root, 0)
    return "\n".join(lines)


def height(root):
    if root.is_leaf():
        return 1
    return 1 + max(height(child) for child in root.children)
