"""
包名称：analysis
功能说明：数值分析包，包含特殊函数、衰落模型、蜂窝几何、中断概率与速率、仿真校验和频率复用评估
"""
