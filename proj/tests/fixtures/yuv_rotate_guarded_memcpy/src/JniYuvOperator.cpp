// JniYuvOperator.cpp source file
JNIEXPORT
void JNICALL Java_YuvOperator_jniRotate
    (JNIEnv *env, jobject obj, jobject handle) {
    JniYuvOperator *yuvOperator =
        env->GetDirectBufferAddress(handle);
    char *yuv = yuvOperator->_yuvData;
    int width = yuvOperator->_width;
    char rowBuf[64];
    if (width <= (int)sizeof(rowBuf)) {
        memcpy(rowBuf, yuv, width);
    }
}
